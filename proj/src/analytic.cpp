#include "secnoma/analytic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

namespace secnoma::analytic {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::atomic<std::uint64_t> g_diagnostics{0};
std::mutex g_handler_mutex;
DiagnosticHandler g_handler;

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

void require_domain(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void check_orders(int order, int n_l) {
  if (n_l > kMaxUsers) {
    throw CombinatorialLimitError("order statistics: n_l = " + std::to_string(n_l) +
                                  " exceeds the supported maximum of " +
                                  std::to_string(kMaxUsers) +
                                  " (the multinomial expansion grows combinatorially)");
  }
  if (order < 1 || order > n_l) {
    throw std::invalid_argument("order statistics: order must lie in [1, n_l]");
  }
}

// phi_order = n_l! / ((n_l - order)! (order - 1)!)
double order_prefactor(int order, int n_l) {
  return factorial(n_l) / (factorial(n_l - order) * factorial(order - 1));
}

// Upper SINR ceiling of the jammed relay link, +inf without jamming.
double jamming_ceiling(double beta) { return beta >= 1.0 ? kInf : beta / (1.0 - beta); }

double coop_link_cdf_raw(double y, const QuadratureConstants& c, const PairConfig& config) {
  if (config.p_c == 0.0) return 1.0;
  const double scale = config.lambda_mn * y / config.p_c;
  double s = 0.0;
  for (std::size_t k = 0; k < c.pair_weights.size(); ++k) {
    s += c.pair_weights[k] * std::exp(-c.pair_rates[k] * scale);
  }
  return (2.0 / kPi) * s;
}

double weak_fjr_cdf_raw(double x, double beta, const QuadratureConstants& c,
                        const PairConfig& config) {
  if (beta >= 1.0) return coop_link_cdf_raw(x, c, config);
  if (x >= jamming_ceiling(beta) || config.p_c == 0.0) return 1.0;
  const double scale = config.lambda_mn * x / (config.p_c * (beta - (1.0 - beta) * x));
  double s = 0.0;
  for (std::size_t k = 0; k < c.pair_weights.size(); ++k) {
    s += c.pair_weights[k] * std::exp(-c.pair_rates[k] * scale);
  }
  return (2.0 / kPi) * s;
}

double weak_phase1_cdf_raw(double x, const QuadratureConstants& c, const PairConfig& config) {
  if (x < 0.0) return 0.0;
  if (x >= config.theta()) return 1.0;
  const double z = x / ((config.a_n_sq - config.a_m_sq * x) * config.p_bs);
  return ordered_gain_cdf_raw(z, config.n, config.n_l, c);
}

void validate_inputs(const PairConfig& config, const NetworkGeometry& geometry) {
  config.validate();
  geometry.validate();
}

SopMetadata metadata(double abs_tol, const QuadratureConstants& constants) {
  return {abs_tol, constants.order(), 0};
}

}  // namespace

// ---- constants ---------------------------------------------------------------

QuadratureConstants QuadratureConstants::build(int order, double r_l, double alpha) {
  if (!(r_l > 0.0)) throw std::invalid_argument("quadrature constants: r_l must be positive");
  QuadratureConstants q;
  q.scheme = math::chebyshev_scheme(order);
  const double w = q.scheme.weight;
  q.disc_weights.assign(1, 0.0);
  q.disc_rates.assign(1, 0.0);
  q.pair_weights.assign(1, 0.0);
  q.pair_rates.assign(1, 0.0);
  for (double phi : q.scheme.nodes) {
    const double root = std::sqrt(1.0 - phi * phi);
    const double t = 1.0 + phi;
    q.disc_weights.push_back(-(w / 2.0) * root * t);
    q.disc_rates.push_back(1.0 + std::pow(r_l * t / 2.0, alpha));
    const double half = t / 2.0;
    const double lens = 2.0 * std::acos(half) - t * std::sqrt(1.0 - half * half);
    q.pair_weights.push_back(-w * root * t * lens);
    q.pair_rates.push_back(1.0 + std::pow(r_l * t, alpha));
  }
  double disc_sum = 0.0;
  double pair_sum = 0.0;
  for (int k = 1; k <= order; ++k) {
    disc_sum += q.disc_weights[k];
    pair_sum += q.pair_weights[k];
  }
  q.disc_weights[0] = -disc_sum;
  q.pair_weights[0] = -pair_sum;
  return q;
}

DerivedScalars DerivedScalars::build(const NetworkGeometry& geometry, const PairConfig& config) {
  validate_inputs(config, geometry);
  DerivedScalars s;
  s.eta = geometry.eta();
  const double p_strong = config.p_bs * config.a_m_sq;
  s.mu1 = s.eta * kPi * geometry.lambda_e * std::pow(p_strong, s.eta);
  s.mu2 = std::pow(geometry.r_p, geometry.alpha) / p_strong;
  s.chi1 = kPi * s.eta * geometry.lambda_e * std::pow(config.p_c, s.eta);
  s.chi2 = kPi * s.eta * math::gamma_fn(s.eta) * geometry.lambda_e;
  s.theta = config.theta();
  s.c_n_g = std::exp2(2.0 * config.r_n);
  s.zeta = (s.c_n_g - 1.0) * (1.0 + s.theta);
  return s;
}

std::string_view to_string(SopKind kind) noexcept {
  switch (kind) {
    case SopKind::kAnalyticExact: return "analytic_exact";
    case SopKind::kAnalyticLowerBound: return "analytic_lower_bound";
    case SopKind::kAnalyticUpperBound: return "analytic_upper_bound";
    case SopKind::kMonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

// ---- diagnostics -------------------------------------------------------------

void set_diagnostic_handler(DiagnosticHandler handler) {
  std::lock_guard lock(g_handler_mutex);
  g_handler = std::move(handler);
}

std::uint64_t diagnostic_count() noexcept { return g_diagnostics.load(); }

void reset_diagnostic_count() noexcept { g_diagnostics.store(0); }

double clamp_probability(double raw, std::string_view where) {
  if (raw < -kClampSlack || raw > 1.0 + kClampSlack || std::isnan(raw)) {
    g_diagnostics.fetch_add(1);
    std::lock_guard lock(g_handler_mutex);
    if (g_handler) g_handler(where, raw);
  }
  if (std::isnan(raw)) throw std::runtime_error(std::string(where) + ": CDF evaluated to NaN");
  return clamp01(raw);
}

// ---- order statistics --------------------------------------------------------

double single_user_gain_cdf_raw(double z, const QuadratureConstants& constants) {
  double s = 0.0;
  for (std::size_t k = 0; k < constants.disc_weights.size(); ++k) {
    s += constants.disc_weights[k] * std::exp(-constants.disc_rates[k] * z);
  }
  return s;
}

double ordered_gain_cdf_raw(double z, int order, int n_l, const QuadratureConstants& constants) {
  check_orders(order, n_l);
  // The inner multinomial sum over compositions of order + p is the
  // (order + p)-th power of the single-user sum.
  const double f1 = single_user_gain_cdf_raw(z, constants);
  double s = 0.0;
  for (int p = 0; p <= n_l - order; ++p) {
    const double sign = p % 2 == 0 ? 1.0 : -1.0;
    s += binomial(n_l - order, p) * sign / (order + p) * std::pow(f1, order + p);
  }
  return order_prefactor(order, n_l) * s;
}

double ordered_gain_cdf_by_compositions(double z, int order, int n_l,
                                        const QuadratureConstants& constants) {
  check_orders(order, n_l);
  const int parts = static_cast<int>(constants.disc_weights.size());
  std::vector<int> q(parts, 0);

  // Sum over q_0 + ... + q_N = total of total!/prod(q_k!) prod(b_k^q_k) e^{-sum q_k c_k z}.
  auto composition_sum = [&](int total) {
    double acc = 0.0;
    auto recurse = [&](auto& self, int index, int remaining) -> void {
      if (index == parts - 1) {
        q[index] = remaining;
        double coef = factorial(total);
        double rate = 0.0;
        for (int k = 0; k < parts; ++k) {
          coef *= std::pow(constants.disc_weights[k], q[k]) / factorial(q[k]);
          rate += q[k] * constants.disc_rates[k];
        }
        acc += coef * std::exp(-rate * z);
        return;
      }
      for (int v = 0; v <= remaining; ++v) {
        q[index] = v;
        self(self, index + 1, remaining - v);
      }
    };
    recurse(recurse, 0, total);
    return acc;
  };

  double s = 0.0;
  for (int p = 0; p <= n_l - order; ++p) {
    const double sign = p % 2 == 0 ? 1.0 : -1.0;
    s += binomial(n_l - order, p) * sign / (order + p) * composition_sum(order + p);
  }
  return order_prefactor(order, n_l) * s;
}

double cdf_ordered_user_gain_snr(double y, int order, int n_l, const QuadratureConstants& constants,
                                 double p_bs, double a_m_sq) {
  require_domain(y >= 0.0, "cdf_ordered_user_gain_snr: requires y >= 0");
  require_domain(p_bs > 0.0 && a_m_sq > 0.0, "cdf_ordered_user_gain_snr: requires P_BS a_m^2 > 0");
  const double raw = ordered_gain_cdf_raw(y / (p_bs * a_m_sq), order, n_l, constants);
  return clamp_probability(raw, "cdf_ordered_user_gain_snr");
}

// ---- phase 1 -----------------------------------------------------------------

double cdf_eve_snr_phase1(double x, const DerivedScalars& s, double p_bs, double a_m_sq) {
  require_domain(x > 0.0, "cdf_eve_snr_phase1: requires x > 0");
  if (s.mu1 == 0.0) return 1.0;
  const double g = s.mu1 * std::exp(-x / (p_bs * a_m_sq)) *
                   math::upper_incomplete_gamma(s.eta, s.mu2 * x) / std::pow(x, s.eta);
  return std::exp(-g);
}

double cdf_eve_snr_phase1_total(double x, const DerivedScalars& s, double p_bs, double a_m_sq) {
  if (x > 0.0) return cdf_eve_snr_phase1(x, s, p_bs, a_m_sq);
  if (x < 0.0) return 0.0;
  return s.mu1 == 0.0 ? 1.0 : 0.0;
}

double pdf_eve_snr_phase1(double x, const DerivedScalars& s, double p_bs, double a_m_sq) {
  require_domain(x > 0.0, "pdf_eve_snr_phase1: requires x > 0");
  if (s.mu1 == 0.0) return 0.0;
  const double scale = p_bs * a_m_sq;
  const double cdf = cdf_eve_snr_phase1(x, s, p_bs, a_m_sq);
  if (cdf == 0.0) return 0.0;
  const double front = s.mu1 * std::exp(-x / scale) / std::pow(x, s.eta);
  const double bracket =
      math::upper_incomplete_gamma(s.eta, s.mu2 * x) * (1.0 / scale + s.eta / x) +
      std::pow(s.mu2, s.eta) * std::pow(x, s.eta - 1.0) * std::exp(-s.mu2 * x);
  return cdf * front * bracket;
}

double cdf_weak_user_phase1_sinr(double x, const QuadratureConstants& constants,
                                 const PairConfig& config) {
  require_domain(x >= 0.0, "cdf_weak_user_phase1_sinr: requires x >= 0");
  return clamp_probability(weak_phase1_cdf_raw(x, constants, config), "cdf_weak_user_phase1_sinr");
}

double cdf_coop_link_snr(double y, const QuadratureConstants& constants, const PairConfig& config) {
  require_domain(y >= 0.0, "cdf_coop_link_snr: requires y >= 0");
  return clamp_probability(coop_link_cdf_raw(y, constants, config), "cdf_coop_link_snr");
}

double pdf_coop_link_snr(double y, const QuadratureConstants& constants, const PairConfig& config) {
  require_domain(y >= 0.0, "pdf_coop_link_snr: requires y >= 0");
  if (config.p_c == 0.0) return 0.0;
  const double rate = config.lambda_mn / config.p_c;
  double s = 0.0;
  for (std::size_t k = 1; k < constants.pair_weights.size(); ++k) {
    s += constants.pair_weights[k] * constants.pair_rates[k] *
         std::exp(-constants.pair_rates[k] * rate * y);
  }
  return -(2.0 * rate / kPi) * s;
}

double pr_strong_secrecy_outage(const PairConfig& config, const NetworkGeometry& geometry,
                                const QuadratureConstants& constants, double abs_tol) {
  const DerivedScalars s = DerivedScalars::build(geometry, config);
  const double c_m = std::exp2(2.0 * config.r_m);
  auto strong_cdf = [&](double y) {
    const double z = y / (config.p_bs * config.a_m_sq);
    return clamp01(ordered_gain_cdf_raw(z, config.m, config.n_l, constants));
  };
  const double atom = cdf_eve_snr_phase1_total(0.0, s, config.p_bs, config.a_m_sq);
  const double at_zero = atom * strong_cdf(c_m - 1.0);
  if (atom == 1.0) return at_zero;
  const double tail = math::integrate_semi_infinite(
      [&](double x) {
        if (x <= 0.0) return 0.0;
        return pdf_eve_snr_phase1(x, s, config.p_bs, config.a_m_sq) *
               strong_cdf(c_m * (1.0 + x) - 1.0);
      },
      abs_tol);
  return clamp01(at_zero + tail);
}

double pr_weak_combined_outage(const PairConfig& config, const NetworkGeometry& geometry,
                               const QuadratureConstants& constants, double abs_tol) {
  validate_inputs(config, geometry);
  const double t = std::exp2(2.0 * config.r_n) - 1.0;
  if (t <= 0.0) return 0.0;
  auto weak_cdf = [&](double x) { return clamp01(weak_phase1_cdf_raw(x, constants, config)); };
  if (config.p_c == 0.0) return weak_cdf(t);

  // Per exponential component k of the cooperative-link density, substitute
  // u = 1 - e^{-r_k x} so the integrand stays bounded however small P_C is.
  const double theta = config.theta();
  const int n = constants.order();
  double total = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double weight = -2.0 * constants.pair_weights[k] / kPi;
    const double r = constants.pair_rates[k] * config.lambda_mn / config.p_c;
    const double upper = -std::expm1(-r * t);
    std::vector<double> cuts;
    if (t > theta) cuts.push_back(-std::expm1(-r * (t - theta)));
    const double part = math::integrate_finite(
        [&](double u) { return weak_cdf(t + std::log1p(-u) / r); }, 0.0, upper, abs_tol / n, cuts);
    total += weight * part;
  }
  return clamp01(total);
}

SopEstimate sop_case1(const PairConfig& config, const NetworkGeometry& geometry,
                      const QuadratureConstants& constants, double abs_tol) {
  validate_inputs(config, geometry);
  if (config.r_n > config.r_m) {
    throw PreconditionError("sop_case1: requires R_n <= R_m");
  }
  SopEstimate out;
  out.metadata = metadata(abs_tol, constants);
  const double c_n = std::exp2(2.0 * config.r_n);
  if (config.a_m_sq > 1.0 / c_n) {
    out.value = 1.0;
    out.kind = SopKind::kAnalyticExact;
    return out;
  }
  const double e2 = pr_strong_secrecy_outage(config, geometry, constants, abs_tol);
  const double e4 = pr_weak_combined_outage(config, geometry, constants, abs_tol);
  out.value = clamp01(1.0 - (1.0 - e4) * (1.0 - e2));
  out.kind = config.a_m_sq <= 1.0 / (c_n + 1.0) ? SopKind::kAnalyticExact
                                                 : SopKind::kAnalyticLowerBound;
  return out;
}

// ---- phase 2 -----------------------------------------------------------------

double cdf_eve_coop_relay(double x, const DerivedScalars& s, double p_c) {
  require_domain(x > 0.0, "cdf_eve_coop_relay: requires x > 0");
  if (s.chi1 == 0.0 || p_c == 0.0) return 1.0;
  const double g = s.chi1 * std::exp(-x / p_c) * math::gamma_fn(s.eta) / std::pow(x, s.eta);
  return std::exp(-g);
}

double pdf_eve_coop_relay(double x, const DerivedScalars& s, double p_c) {
  require_domain(x > 0.0, "pdf_eve_coop_relay: requires x > 0");
  if (s.chi1 == 0.0 || p_c == 0.0) return 0.0;
  const double g = s.chi1 * std::exp(-x / p_c) * math::gamma_fn(s.eta) / std::pow(x, s.eta);
  const double cdf = std::exp(-g);
  if (cdf == 0.0) return 0.0;
  return cdf * g * (1.0 / p_c + s.eta / x);
}

double cdf_eve_coop_fjr(double x, double beta, const DerivedScalars& s, double p_c) {
  require_domain(x > 0.0, "cdf_eve_coop_fjr: requires x > 0");
  require_domain(beta > 0.0 && beta <= 1.0, "cdf_eve_coop_fjr: requires 0 < beta <= 1");
  if (x >= jamming_ceiling(beta) || s.chi2 == 0.0 || p_c == 0.0) return 1.0;
  const double d = p_c * (beta - (1.0 - beta) * x);
  const double g = s.chi2 * std::exp(-x / d) * std::pow(d / x, s.eta);
  return std::exp(-g);
}

double pdf_eve_coop_fjr(double x, double beta, const DerivedScalars& s, double p_c) {
  require_domain(x > 0.0, "pdf_eve_coop_fjr: requires x > 0");
  require_domain(beta > 0.0 && beta <= 1.0, "pdf_eve_coop_fjr: requires 0 < beta <= 1");
  if (x >= jamming_ceiling(beta) || s.chi2 == 0.0 || p_c == 0.0) return 0.0;
  const double d = p_c * (beta - (1.0 - beta) * x);
  const double u = x / d;
  const double g = s.chi2 * std::exp(-u) * std::pow(u, -s.eta);
  const double log_pdf = -g + std::log(s.chi2 * beta * p_c) - u - s.eta * std::log(u) +
                         std::log1p(s.eta / u) - 2.0 * std::log(d);
  return std::exp(log_pdf);
}

double cdf_weak_coop_fjr(double x, double beta, const QuadratureConstants& constants,
                         const PairConfig& config) {
  require_domain(x >= 0.0, "cdf_weak_coop_fjr: requires x >= 0");
  require_domain(beta >= 0.0 && beta <= 1.0, "cdf_weak_coop_fjr: requires 0 <= beta <= 1");
  return clamp_probability(weak_fjr_cdf_raw(x, beta, constants, config), "cdf_weak_coop_fjr");
}

SopEstimate sop_weak_high_snr(const PairConfig& config, const NetworkGeometry& geometry,
                              const QuadratureConstants& constants, CoopStrategy strategy,
                              double abs_tol) {
  const DerivedScalars s = DerivedScalars::build(geometry, config);
  SopEstimate out;
  out.metadata = metadata(abs_tol, constants);
  if (s.theta <= s.zeta) {
    out.value = 1.0;
    out.kind = SopKind::kAnalyticExact;
    return out;
  }
  const bool relay = strategy == CoopStrategy::kRelay;
  const double beta = relay ? 1.0 : config.beta;
  if (beta == 0.0) {
    // Everything goes to jamming: the weak user never receives the relayed copy.
    out.value = 1.0;
    out.kind = SopKind::kAnalyticExact;
    return out;
  }

  auto eve_cdf = [&](double x) {
    if (x <= 0.0) return (s.chi2 == 0.0 || config.p_c == 0.0) ? 1.0 : 0.0;
    return relay ? cdf_eve_coop_relay(x, s, config.p_c)
                 : cdf_eve_coop_fjr(x, beta, s, config.p_c);
  };
  auto eve_pdf = [&](double x) {
    if (x <= 0.0) return 0.0;
    return relay ? pdf_eve_coop_relay(x, s, config.p_c)
                 : pdf_eve_coop_fjr(x, beta, s, config.p_c);
  };
  auto weak_cdf = [&](double x) {
    return clamp01(relay ? coop_link_cdf_raw(x, constants, config)
                         : weak_fjr_cdf_raw(x, beta, constants, config));
  };

  const double c = s.c_n_g;
  const double a = (s.theta - s.zeta) / c;
  const double ceiling = jamming_ceiling(beta);
  const double upper = std::min(a, ceiling);
  std::vector<double> cuts = math::geometric_breakpoints(0.0, upper);
  if (std::isfinite(ceiling)) cuts.push_back((ceiling - s.zeta) / c);

  const double atom = eve_cdf(0.0);
  const double integral = math::integrate_finite(
      [&](double y) { return eve_pdf(y) * weak_cdf(s.zeta + c * y); }, 0.0, upper, abs_tol, cuts);
  out.value = clamp01(1.0 - eve_cdf(a) + atom * weak_cdf(s.zeta) + integral);
  out.kind = SopKind::kAnalyticUpperBound;
  return out;
}

SopEstimate sop_case2(const PairConfig& config, const NetworkGeometry& geometry,
                      const QuadratureConstants& constants, CoopStrategy strategy,
                      double abs_tol) {
  validate_inputs(config, geometry);
  if (config.a_m_sq > 1.0 / std::exp2(2.0 * config.r_n)) {
    throw PreconditionError("sop_case2: requires a_m^2 <= 1/2^(2 R_n)");
  }
  const double sop_m = pr_strong_secrecy_outage(config, geometry, constants, abs_tol);
  const SopEstimate weak = sop_weak_high_snr(config, geometry, constants, strategy, abs_tol);
  SopEstimate out;
  out.metadata = metadata(abs_tol, constants);
  out.value = clamp01(1.0 - (1.0 - sop_m) * (1.0 - weak.value));
  out.kind = SopKind::kAnalyticUpperBound;
  return out;
}

}  // namespace secnoma::analytic
