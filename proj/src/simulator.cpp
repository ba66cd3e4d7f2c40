#include "secnoma/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace secnoma::sim {

namespace {

struct UserPair {
  UserSample strong;
  UserSample weak;
};

UserPair sample_pair_users(const TrialSpec& spec, std::uint64_t seed, std::uint64_t trial) {
  StreamRng rng(stream_seed(seed, trial, StreamId::kUsers));
  const auto users = sample_users(spec.geometry, spec.config, spec.mode.kind, rng);
  return {users[static_cast<std::size_t>(spec.config.m - 1)],
          users[static_cast<std::size_t>(spec.config.n - 1)]};
}

// SINR of the weak message at a receiver with gain h after phase 1.
double weak_message_sinr(double h, const PairConfig& c) {
  return h * c.a_n_sq / (h * c.a_m_sq + 1.0 / c.p_bs);
}

double coop_gain(const TrialSpec& spec, std::uint64_t seed, std::uint64_t trial) {
  StreamRng rng(stream_seed(seed, trial, StreamId::kPairLink));
  const PairLink link = sample_pair_link(spec.config, spec.geometry, rng);
  return path_gain(link.fade, link.distance, spec.geometry.alpha);
}

RadialPpp eavesdropper_ppp(const TrialSpec& spec, double inner, double outer) {
  RadialPpp ppp;
  ppp.inner = inner;
  ppp.outer = outer;
  ppp.lambda = spec.geometry.lambda_e;
  ppp.lambda_ref = spec.mode.reference_intensity(spec.geometry);
  ppp.alpha = spec.geometry.alpha;
  return ppp;
}

// Largest |h_e|^2 from the BS over the phase-1 eavesdropper region.
double eve_phase1_max_gain(const TrialSpec& spec, std::uint64_t seed, std::uint64_t trial) {
  const NetworkGeometry& g = spec.geometry;
  const RadialPpp ppp = spec.mode.kind == SamplingModeKind::kAnalyticMatched
                            ? eavesdropper_ppp(spec, g.r_p, spec.mode.truncation_radius(g))
                            : eavesdropper_ppp(spec, g.r_l, g.r_e);
  return sample_strongest_path_gain(ppp, seed, trial, StreamId::kEavesdroppersPhase1);
}

// Largest |g_me|^2 / (1 + d_me^alpha) from the strong user over the phase-2 region.
double eve_phase2_max_gain(const TrialSpec& spec, std::uint64_t seed, std::uint64_t trial,
                           Point strong_position) {
  const NetworkGeometry& g = spec.geometry;
  if (spec.mode.kind == SamplingModeKind::kAnalyticMatched) {
    const RadialPpp ppp = eavesdropper_ppp(spec, 0.0, spec.mode.truncation_radius(g));
    return sample_strongest_path_gain(ppp, seed, trial, StreamId::kEavesdroppersPhase2);
  }
  StreamRng rng(stream_seed(seed, trial, StreamId::kEavesdroppersPhase2));
  const auto eves =
      sample_eavesdroppers(g, spec.mode, Phase::kPhase2FromStrongUser, strong_position, rng);
  double best = 0.0;
  for (const Eavesdropper& e : eves) best = std::max(best, path_gain(e.fade_strong, e.d_strong, g.alpha));
  return best;
}

double jammed_sinr(double gain, double beta, double p_c) {
  return beta * p_c * gain / (1.0 + (1.0 - beta) * p_c * gain);
}

double relayed_sinr(const TrialSpec& spec, double gain) {
  const double p_c = spec.config.p_c;
  return spec.scenario == Scenario::kCase2Fjr ? jammed_sinr(gain, spec.config.beta, p_c)
                                              : p_c * gain;
}

bool case2_high_snr(const TrialSpec& spec, std::uint64_t seed, std::uint64_t trial) {
  const PairConfig& c = spec.config;
  const double theta = c.theta();
  const double c_n = std::exp2(2.0 * c.r_n);
  const UserPair users = sample_pair_users(spec, seed, trial);
  const double gamma_n = relayed_sinr(spec, coop_gain(spec, seed, trial));
  const double gamma_e =
      relayed_sinr(spec, eve_phase2_max_gain(spec, seed, trial, users.strong.position));
  return (1.0 + theta + std::min(gamma_n, theta)) < c_n * (1.0 + theta + std::min(gamma_e, theta));
}

// Finite P_BS: every eavesdropper combines its phase-1 and phase-2 copies.
bool case2_finite(const TrialSpec& spec, std::uint64_t seed, std::uint64_t trial) {
  const PairConfig& c = spec.config;
  const NetworkGeometry& g = spec.geometry;
  const UserPair users = sample_pair_users(spec, seed, trial);
  const double relay_cap = weak_message_sinr(users.strong.gain, c);
  const double gamma_n = weak_message_sinr(users.weak.gain, c) +
                         std::min(relayed_sinr(spec, coop_gain(spec, seed, trial)), relay_cap);

  StreamRng rng(stream_seed(seed, trial, StreamId::kEavesdroppersPhase2));
  const auto eves = sample_eavesdroppers(g, spec.mode, Phase::kPhase2FromStrongUser,
                                         users.strong.position, rng);
  double gamma_e = 0.0;
  for (const Eavesdropper& e : eves) {
    const double first = weak_message_sinr(path_gain(e.fade_bs, e.d_bs, g.alpha), c);
    const double second = relayed_sinr(spec, path_gain(e.fade_strong, e.d_strong, g.alpha));
    gamma_e = std::max(gamma_e, first + std::min(second, relay_cap));
  }
  return 0.5 * std::log2(1.0 + gamma_n) - 0.5 * std::log2(1.0 + gamma_e) < c.r_n;
}

}  // namespace

void TrialSpec::validate() const {
  config.validate();
  geometry.validate();
  mode.validate(geometry);
  const bool case1 = scenario == Scenario::kCase1 || scenario == Scenario::kCoopNoEves;
  if (case1 && config.r_n > config.r_m) {
    throw analytic::PreconditionError("case 1 requires R_n <= R_m");
  }
}

analytic::SopEstimate SopMonteCarlo::as_estimate() const {
  analytic::SopEstimate e;
  e.value = estimate;
  e.kind = analytic::SopKind::kMonteCarlo;
  e.stderr_ = stderr_;
  e.metadata.n_trials = n_trials;
  return e;
}

TrialQuantities sample_trial_quantities(const TrialSpec& spec, std::uint64_t master_seed,
                                        std::uint64_t trial) {
  const PairConfig& c = spec.config;
  const UserPair users = sample_pair_users(spec, master_seed, trial);
  TrialQuantities q;
  q.strong_gain = users.strong.gain;
  q.weak_gain = users.weak.gain;
  q.strong_snr = c.a_m_sq * c.p_bs * q.strong_gain;
  q.strong_weak_sinr = weak_message_sinr(q.strong_gain, c);
  q.weak_sinr = weak_message_sinr(q.weak_gain, c);
  if (spec.scenario != Scenario::kCoopNoEves) {
    q.eve_snr_phase1 = c.a_m_sq * c.p_bs * eve_phase1_max_gain(spec, master_seed, trial);
  }
  q.coop_snr = c.p_c * coop_gain(spec, master_seed, trial);
  return q;
}

Case1Events case1_events(const TrialSpec& spec, std::uint64_t master_seed, std::uint64_t trial) {
  const PairConfig& c = spec.config;
  const TrialQuantities q = sample_trial_quantities(spec, master_seed, trial);
  Case1Events ev;
  ev.e1 = 0.5 * std::log2(1.0 + q.strong_weak_sinr) >= c.r_n;
  ev.e2 = 0.5 * std::log2((1.0 + q.strong_snr) / (1.0 + q.eve_snr_phase1)) >= c.r_m;
  ev.e3 = 0.5 * std::log2(1.0 + q.weak_sinr + std::min(q.coop_snr, q.strong_weak_sinr)) >= c.r_n;
  return ev;
}

bool run_trial_case1(const TrialSpec& spec, std::uint64_t master_seed, std::uint64_t trial) {
  return case1_events(spec, master_seed, trial).outage();
}

bool run_trial_case2(const TrialSpec& spec, std::uint64_t master_seed, std::uint64_t trial) {
  return spec.high_snr_proxy ? case2_high_snr(spec, master_seed, trial)
                             : case2_finite(spec, master_seed, trial);
}

bool run_trial_noncoop(const TrialSpec& spec, std::uint64_t master_seed, std::uint64_t trial) {
  const PairConfig& c = spec.config;
  const TrialQuantities q = sample_trial_quantities(spec, master_seed, trial);
  const bool sic = std::log2(1.0 + q.strong_weak_sinr) >= c.r_n;
  const bool secret = std::log2((1.0 + q.strong_snr) / (1.0 + q.eve_snr_phase1)) >= c.r_m;
  const bool weak = std::log2(1.0 + q.weak_sinr) >= c.r_n;
  return !(sic && secret && weak);
}

bool run_trial(const TrialSpec& spec, std::uint64_t master_seed, std::uint64_t trial) {
  switch (spec.scenario) {
    case Scenario::kCase1:
    case Scenario::kCoopNoEves: return run_trial_case1(spec, master_seed, trial);
    case Scenario::kCase2Relay:
    case Scenario::kCase2Fjr: return run_trial_case2(spec, master_seed, trial);
    case Scenario::kNonCoopNoma: return run_trial_noncoop(spec, master_seed, trial);
  }
  throw std::logic_error("run_trial: unknown scenario");
}

namespace {

unsigned resolve_workers(unsigned workers, std::uint64_t items) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(items, 1)));
}

// Runs body(chunk, begin, end) over `workers` contiguous chunks of [0, n).
template <typename Body>
void for_chunks(std::uint64_t n, unsigned workers, Body body) {
  workers = resolve_workers(workers, n);
  if (workers == 1) {
    body(0u, std::uint64_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = n * w / workers;
    const std::uint64_t end = n * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] {
      try {
        body(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::uint64_t count_trials(std::uint64_t n_trials, unsigned workers,
                           const std::function<bool(std::uint64_t)>& predicate) {
  const unsigned w = resolve_workers(workers, n_trials);
  std::vector<std::uint64_t> counts(w, 0);
  for_chunks(n_trials, w, [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
    std::uint64_t local = 0;
    for (std::uint64_t t = begin; t < end; ++t) local += predicate(t) ? 1 : 0;
    counts[chunk] = local;
  });
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  return total;
}

SopMonteCarlo estimate_sop(const TrialSpec& spec, std::uint64_t n_trials, std::uint64_t master_seed,
                           unsigned workers) {
  if (n_trials < 1) throw std::invalid_argument("estimate_sop: n_trials must be at least 1");
  spec.validate();
  SopMonteCarlo mc;
  mc.n_trials = n_trials;
  mc.master_seed = master_seed;
  mc.outage_count = count_trials(n_trials, workers, [&](std::uint64_t t) {
    return run_trial(spec, master_seed, t);
  });
  mc.estimate = static_cast<double>(mc.outage_count) / static_cast<double>(n_trials);
  mc.stderr_ = std::sqrt(mc.estimate * (1.0 - mc.estimate) / static_cast<double>(n_trials));
  return mc;
}

std::vector<double> sample_quantity(const TrialSpec& spec, Quantity quantity, std::uint64_t count,
                                    std::uint64_t master_seed, unsigned workers) {
  spec.config.validate();
  spec.geometry.validate();
  spec.mode.validate(spec.geometry);
  const PairConfig& c = spec.config;
  auto one = [&](std::uint64_t t) -> double {
    switch (quantity) {
      case Quantity::kStrongUserSnr:
        return c.a_m_sq * c.p_bs * sample_pair_users(spec, master_seed, t).strong.gain;
      case Quantity::kWeakUserSinr:
        return weak_message_sinr(sample_pair_users(spec, master_seed, t).weak.gain, c);
      case Quantity::kEveSnrPhase1:
        return c.a_m_sq * c.p_bs * eve_phase1_max_gain(spec, master_seed, t);
      case Quantity::kCoopLinkSnr: return c.p_c * coop_gain(spec, master_seed, t);
      case Quantity::kEveCoopRelaySnr:
      case Quantity::kEveCoopFjrSinr: {
        const Point where = sample_pair_users(spec, master_seed, t).strong.position;
        const double gain = eve_phase2_max_gain(spec, master_seed, t, where);
        return quantity == Quantity::kEveCoopRelaySnr ? c.p_c * gain
                                                      : jammed_sinr(gain, c.beta, c.p_c);
      }
      case Quantity::kWeakCoopFjrSinr:
        return jammed_sinr(coop_gain(spec, master_seed, t), c.beta, c.p_c);
    }
    throw std::logic_error("sample_quantity: unknown quantity");
  };
  std::vector<double> out(count);
  for_chunks(count, workers, [&](unsigned, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t t = begin; t < end; ++t) out[t] = one(t);
  });
  return out;
}

ChannelRealization sample_realization(const TrialSpec& spec, std::uint64_t master_seed,
                                      std::uint64_t trial) {
  spec.validate();
  StreamRng user_rng(stream_seed(master_seed, trial, StreamId::kUsers));
  const auto users = sample_users(spec.geometry, spec.config, spec.mode.kind, user_rng);
  ChannelRealization world;
  for (const UserSample& u : users) world.ordered_user_gains.push_back(u.gain);

  StreamRng link_rng(stream_seed(master_seed, trial, StreamId::kPairLink));
  const PairLink link = sample_pair_link(spec.config, spec.geometry, link_rng);
  world.pair_distance = link.distance;
  world.pair_fade = link.fade;

  StreamRng eve_rng(stream_seed(master_seed, trial, StreamId::kEavesdroppersPhase2));
  const Point strong = users[static_cast<std::size_t>(spec.config.m - 1)].position;
  world.eavesdroppers = sample_eavesdroppers(spec.geometry, spec.mode,
                                             Phase::kPhase2FromStrongUser, strong, eve_rng);
  return world;
}

// ---- empirical CDF ------------------------------------------------------------

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: no samples");
  for (double x : sorted_) {
    if (std::isnan(x)) throw std::invalid_argument("EmpiricalCdf: NaN sample");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::ks_distance(const std::function<double(double)>& cdf) const {
  const double n = static_cast<double>(sorted_.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted_.size()) {
    const double x = sorted_[i];
    std::size_t j = i;
    while (j < sorted_.size() && sorted_[j] == x) ++j;
    const double below = cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    d = std::max(d, std::abs(static_cast<double>(i) / n - below));
    d = std::max(d, std::abs(static_cast<double>(j) / n - cdf(x)));
    i = j;
  }
  return d;
}

double EmpiricalCdf::ks_distance(const EmpiricalCdf& other) const {
  const auto& a = sorted_;
  const auto& b = other.sorted_;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      x = a[i];
    } else {
      x = b[j];
    }
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace secnoma::sim
