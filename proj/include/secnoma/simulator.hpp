#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "secnoma/analytic.hpp"
#include "secnoma/geometry.hpp"

namespace secnoma::sim {

enum class Scenario {
  kCase1,        // strong message secret, weak user helped by the relay
  kCase2Relay,   // weak message secret, strong user relays
  kCase2Fjr,     // weak message secret, strong user relays and jams
  kNonCoopNoma,  // single phase, full rate, strong message secret
  kCoopNoEves,   // case 1 with the eavesdroppers removed
};

struct TrialSpec {
  PairConfig config;
  NetworkGeometry geometry;
  SamplingMode mode;
  Scenario scenario = Scenario::kCase1;
  /// Case 2 only: score the P_BS -> infinity ratio event instead of
  /// simulating config.p_bs with MRC at every eavesdropper.
  bool high_snr_proxy = true;

  /// Throws analytic::PreconditionError for scenario preconditions and
  /// std::invalid_argument for invalid parameters.
  void validate() const;
};

/// P_BS used for the finite-power sanity check of the high-SNR limit (120 dB).
inline constexpr double kFiniteHighSnrPBs = 1e12;

struct SopMonteCarlo {
  std::uint64_t outage_count = 0;
  std::uint64_t n_trials = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t master_seed = 0;

  analytic::SopEstimate as_estimate() const;
};

/// Per-trial event quantities of the first phase and the cooperative link.
/// Everything is derived from (spec, master_seed, trial) alone.
struct TrialQuantities {
  double strong_gain = 0.0;        // |h_m|^2
  double weak_gain = 0.0;          // |h_n|^2
  double strong_snr = 0.0;         // gamma_m^{m,(1)} = a_m^2 P_BS |h_m|^2
  double strong_weak_sinr = 0.0;   // gamma_m^{n,(1)}
  double weak_sinr = 0.0;          // gamma_n^{n,(1)}
  double eve_snr_phase1 = 0.0;     // max_e a_m^2 P_BS |h_e|^2
  double coop_snr = 0.0;           // gamma_n^{n,(2)} = P_C |g_mn|^2 / (1 + d_mn^alpha)
};

TrialQuantities sample_trial_quantities(const TrialSpec& spec, std::uint64_t master_seed,
                                        std::uint64_t trial);

/// Case-1 event flags of one trial. E1: the strong user decodes the weak
/// message; E2: the strong message is secret; E3: the weak user decodes with
/// MRC over both phases.
struct Case1Events {
  bool e1 = false;
  bool e2 = false;
  bool e3 = false;
  bool outage() const noexcept { return !(e1 && e2 && e3); }
};

Case1Events case1_events(const TrialSpec& spec, std::uint64_t master_seed, std::uint64_t trial);

bool run_trial_case1(const TrialSpec& spec, std::uint64_t master_seed, std::uint64_t trial);
bool run_trial_case2(const TrialSpec& spec, std::uint64_t master_seed, std::uint64_t trial);
bool run_trial_noncoop(const TrialSpec& spec, std::uint64_t master_seed, std::uint64_t trial);

/// Dispatches on spec.scenario.
bool run_trial(const TrialSpec& spec, std::uint64_t master_seed, std::uint64_t trial);

/// Splits [0, n_trials) into `workers` contiguous chunks and sums the counts.
/// The result does not depend on `workers`; 0 selects the hardware concurrency.
std::uint64_t count_trials(std::uint64_t n_trials, unsigned workers,
                           const std::function<bool(std::uint64_t)>& predicate);

SopMonteCarlo estimate_sop(const TrialSpec& spec, std::uint64_t n_trials, std::uint64_t master_seed,
                           unsigned workers = 0);

/// Per-world random variables with an analytic law, for distribution tests.
enum class Quantity {
  kStrongUserSnr,      // a_m^2 P_BS |h_m|^2
  kWeakUserSinr,       // gamma_n^{n,(1)}
  kEveSnrPhase1,       // max_e a_m^2 P_BS |h_e|^2 (phase-1 region)
  kCoopLinkSnr,        // P_C |g_mn|^2 / (1 + d_mn^alpha)
  kEveCoopRelaySnr,    // max_e P_C |g_me|^2 / (1 + d_me^alpha) (phase-2 region)
  kEveCoopFjrSinr,     // same links with the beta split and jamming
  kWeakCoopFjrSinr,    // the weak user's jammed relay-link SINR
};

std::vector<double> sample_quantity(const TrialSpec& spec, Quantity quantity, std::uint64_t count,
                                    std::uint64_t master_seed, unsigned workers = 0);

/// One full world, with the eavesdropper point set materialised (phase-2
/// placement when a strong-user position defines it).
ChannelRealization sample_realization(const TrialSpec& spec, std::uint64_t master_seed,
                                      std::uint64_t trial);

/// Right-continuous empirical CDF.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double x) const;
  std::size_t size() const noexcept { return sorted_.size(); }
  std::span<const double> sorted() const noexcept { return sorted_; }

  /// sup_x |F_n(x) - cdf(x)| for a right-continuous nondecreasing `cdf`.
  double ks_distance(const std::function<double(double)>& cdf) const;
  double ks_distance(const EmpiricalCdf& other) const;

 private:
  std::vector<double> sorted_;
};

}  // namespace secnoma::sim
