#include "secnoma/special_math.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace secnoma::math {

double gamma_fn(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::domain_error("gamma_fn: argument must be positive and finite");
  }
  return std::tgamma(s);
}

namespace {

constexpr int kMaxGammaIterations = 100000;

// Lower incomplete gamma by its power series; converges quickly for q < p + 1.
double lower_incomplete_gamma_series(double p, double q) {
  double term = 1.0 / p;
  double sum = term;
  for (int n = 1; n < kMaxGammaIterations; ++n) {
    term *= q / (p + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) {
      return sum * std::exp(-q + p * std::log(q));
    }
  }
  throw std::runtime_error("upper_incomplete_gamma: series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Gamma(p, q), q >= p + 1.
double upper_incomplete_gamma_fraction(double p, double q) {
  constexpr double tiny = 1e-300;
  double b = q + 1.0 - p;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxGammaIterations; ++i) {
    const double an = -i * (i - p);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      return std::exp(-q + p * std::log(q)) * h;
    }
  }
  throw std::runtime_error("upper_incomplete_gamma: continued fraction did not converge");
}

}  // namespace

double upper_incomplete_gamma(double p, double q) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw std::domain_error("upper_incomplete_gamma: p must be positive and finite");
  }
  if (!(q >= 0.0)) {
    throw std::domain_error("upper_incomplete_gamma: q must be nonnegative");
  }
  if (q == 0.0) return gamma_fn(p);
  if (std::isinf(q)) return 0.0;
  if (q < p + 1.0) {
    return gamma_fn(p) - lower_incomplete_gamma_series(p, q);
  }
  return upper_incomplete_gamma_fraction(p, q);
}

ChebyshevScheme chebyshev_scheme(int order) {
  if (order < 1) {
    throw std::domain_error("chebyshev_scheme: order must be at least 1");
  }
  ChebyshevScheme scheme;
  scheme.order = order;
  scheme.weight = std::numbers::pi / order;
  scheme.nodes.reserve(order);
  for (int k = 1; k <= order; ++k) {
    scheme.nodes.push_back(std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * order)));
  }
  return scheme;
}

namespace {

// QUADPACK 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kMaxSubdivisions = 20000;

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw IntegrationError("integrand is not finite at x = " + std::to_string(x), 0.0, 0.0);
  }
  return y;
}

Panel kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = checked(f, center - dx) + checked(f, center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

// Global adaptive bisection: always split the panel with the largest error.
double integrate_adaptive(const Integrand& f, std::vector<double> cuts, double abs_tol) {
  std::priority_queue<Panel> open;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    Panel p = kronrod15(f, cuts[i], cuts[i + 1]);
    total_error += p.error;
    open.push(p);
  }

  auto sum_value = [&] {
    double v = 0.0;
    auto copy = open;
    while (!copy.empty()) {
      v += copy.top().value;
      copy.pop();
    }
    return v;
  };

  int splits = 0;
  while (total_error > abs_tol) {
    if (open.empty() || splits >= kMaxSubdivisions) {
      const double v = sum_value();
      throw IntegrationError("adaptive quadrature did not reach the requested tolerance", v,
                             total_error);
    }
    const Panel worst = open.top();
    open.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    // Below a few ulps the nodes coincide and the error estimate collapses to zero.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(std::abs(worst.a), std::abs(worst.b));
    if (worst.b - worst.a <= floor || !(mid > worst.a && mid < worst.b)) {
      throw IntegrationError("adaptive quadrature cannot refine the panel near x = " + std::to_string(mid),
                             sum_value(), total_error);
    }
    const Panel left = kronrod15(f, worst.a, mid);
    const Panel right = kronrod15(f, mid, worst.b);
    total_error += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    ++splits;
    // Re-sum occasionally so cancellation in the running total cannot stall the loop.
    if (splits % 256 == 0) {
      double e = 0.0;
      auto copy = open;
      while (!copy.empty()) {
        e += copy.top().error;
        copy.pop();
      }
      total_error = e;
    }
  }
  return sum_value();
}

void check_tolerance(double abs_tol) {
  if (!(abs_tol > 0.0)) {
    throw std::domain_error("integration tolerance must be positive");
  }
}

}  // namespace

double integrate_finite(const Integrand& f, double a, double b, double abs_tol,
                        std::span<const double> breakpoints) {
  check_tolerance(abs_tol);
  if (!(a <= b)) {
    throw std::domain_error("integrate_finite: requires a <= b");
  }
  if (a == b) return 0.0;
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return integrate_adaptive(f, std::move(cuts), abs_tol);
}

double integrate_semi_infinite(const Integrand& f, double abs_tol) {
  check_tolerance(abs_tol);
  // x = t / (1 - t) maps [0, 1) onto [0, inf).
  const Integrand mapped = [&f](double t) {
    const double one_minus = 1.0 - t;
    const double x = t / one_minus;
    if (!std::isfinite(x)) return 0.0;
    return f(x) / (one_minus * one_minus);
  };
  std::vector<double> cuts{0.0};
  for (int k = -12; k <= 12; ++k) {
    const double x = std::pow(10.0, k);
    cuts.push_back(x / (1.0 + x));
  }
  cuts.push_back(1.0);
  return integrate_adaptive(mapped, std::move(cuts), abs_tol);
}

std::vector<double> geometric_breakpoints(double a, double b, int decades) {
  std::vector<double> points;
  points.reserve(decades);
  for (int k = decades; k >= 1; --k) {
    points.push_back(a + (b - a) * std::pow(10.0, -k));
  }
  return points;
}

}  // namespace secnoma::math
