#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "secnoma/geometry.hpp"
#include "secnoma/special_math.hpp"

namespace secnoma::analytic {

inline constexpr int kDefaultQuadratureOrder = 20;
/// Largest n_l accepted by the order-statistic CDFs.
inline constexpr int kMaxUsers = 10;
/// Raw CDF values outside [-eps, 1 + eps] are reported before clamping.
inline constexpr double kClampSlack = 1e-6;

/// An operation was called outside the parameter region where its formula holds.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CombinatorialLimitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gauss-Chebyshev coefficient families for the two distance laws.
///
/// disc_*  : distance of a uniform user on the r_l disc,
///           b_k = -(pi/2N) sqrt(1 - phi_k^2)(phi_k + 1), c_k = 1 + (r_l(phi_k + 1)/2)^alpha.
/// pair_*  : distance between two uniform users on the disc,
///           B_k = -(pi/N) sqrt(1 - phi_k^2)(1 + phi_k)(2 acos((1 + phi_k)/2)
///                 - (1 + phi_k) sqrt(1 - (1 + phi_k)^2/4)), C_k = 1 + (r_l(1 + phi_k))^alpha.
/// Index 0 holds the closing term: weight -sum_{k>=1}, rate 0.
struct QuadratureConstants {
  math::ChebyshevScheme scheme;
  std::vector<double> disc_weights;
  std::vector<double> disc_rates;
  std::vector<double> pair_weights;
  std::vector<double> pair_rates;

  static QuadratureConstants build(int order, double r_l, double alpha);
  int order() const noexcept { return scheme.order; }
};

/// Scalars shared by the closed forms.
struct DerivedScalars {
  double eta = 0.0;     // 2 / alpha
  double mu1 = 0.0;     // eta pi lambda_e (P_BS a_m^2)^eta
  double mu2 = 0.0;     // r_p^alpha / (P_BS a_m^2)
  double chi1 = 0.0;    // pi eta lambda_e P_C^eta
  double chi2 = 0.0;    // pi eta Gamma(eta) lambda_e
  double theta = 0.0;   // a_n^2 / a_m^2
  double c_n_g = 0.0;   // 2^(2 R_n)
  double zeta = 0.0;    // (C_n^g - 1)(1 + theta)

  static DerivedScalars build(const NetworkGeometry& geometry, const PairConfig& config);
};

enum class SopKind { kAnalyticExact, kAnalyticLowerBound, kAnalyticUpperBound, kMonteCarlo };

std::string_view to_string(SopKind kind) noexcept;

struct SopMetadata {
  double abs_tol = 0.0;
  int quadrature_order = 0;
  std::uint64_t n_trials = 0;
};

struct SopEstimate {
  double value = 0.0;
  SopKind kind = SopKind::kAnalyticExact;
  std::optional<double> stderr_;  // present iff kind == kMonteCarlo
  SopMetadata metadata;
};

enum class CoopStrategy { kRelay, kFriendlyJammerRelay };

// ---- diagnostics -----------------------------------------------------------

using DiagnosticHandler = std::function<void(std::string_view where, double raw)>;

/// Installs the callback invoked when a raw CDF leaves [-eps, 1 + eps].
/// Pass an empty function to disable. Thread-safe.
void set_diagnostic_handler(DiagnosticHandler handler);
std::uint64_t diagnostic_count() noexcept;
void reset_diagnostic_count() noexcept;

/// Clamps `raw` to [0, 1], reporting it first when it is outside the slack.
double clamp_probability(double raw, std::string_view where);

// ---- order statistics of the user gains ------------------------------------

/// CDF of one user's |h|^2 at z under the disc quadrature: sum_k b_k e^{-c_k z}.
double single_user_gain_cdf_raw(double z, const QuadratureConstants& constants);

/// CDF of the order-th smallest of n_l user gains at z (unclamped).
/// Evaluates the multinomial sum in collapsed form.
double ordered_gain_cdf_raw(double z, int order, int n_l, const QuadratureConstants& constants);

/// Same quantity, enumerating every composition (q_0..q_N) of order + p
/// explicitly. Cost grows like C(N + n_l, n_l); intended for cross-checks.
double ordered_gain_cdf_by_compositions(double z, int order, int n_l,
                                        const QuadratureConstants& constants);

/// CDF of a_m^2 P_BS |h_(order)|^2 at y.
double cdf_ordered_user_gain_snr(double y, int order, int n_l, const QuadratureConstants& constants,
                                 double p_bs, double a_m_sq);

// ---- phase 1 ---------------------------------------------------------------

/// CDF of the strongest eavesdropper SNR for the strong message in phase 1.
/// Requires x > 0.
double cdf_eve_snr_phase1(double x, const DerivedScalars& scalars, double p_bs, double a_m_sq);
/// Total version: returns the limit from the right at x = 0 and 0 below.
double cdf_eve_snr_phase1_total(double x, const DerivedScalars& scalars, double p_bs,
                                double a_m_sq);
double pdf_eve_snr_phase1(double x, const DerivedScalars& scalars, double p_bs, double a_m_sq);

/// CDF of the weak user's phase-1 SINR |h_n|^2 a_n^2 / (|h_n|^2 a_m^2 + 1/P_BS).
/// 0 below 0, 1 from the ceiling theta upward.
double cdf_weak_user_phase1_sinr(double x, const QuadratureConstants& constants,
                                 const PairConfig& config);

/// CDF / PDF of the cooperative link SNR P_C |g_mn|^2 / (1 + d_mn^alpha).
double cdf_coop_link_snr(double y, const QuadratureConstants& constants, const PairConfig& config);
double pdf_coop_link_snr(double y, const QuadratureConstants& constants, const PairConfig& config);

/// Pr{strong user cannot decode its message securely}, both phases halved.
double pr_strong_secrecy_outage(const PairConfig& config, const NetworkGeometry& geometry,
                                const QuadratureConstants& constants,
                                double abs_tol = math::kDefaultAbsTol);

/// Pr{weak user fails with the direct and relayed SNR summed}.
double pr_weak_combined_outage(const PairConfig& config, const NetworkGeometry& geometry,
                               const QuadratureConstants& constants,
                               double abs_tol = math::kDefaultAbsTol);

/// System SOP when only the strong message must be secret. Exact for
/// a_m^2 <= 1/(2^{2R_n} + 1), a lower bound up to 1/2^{2R_n}, and 1 beyond
/// (SIC impossible). Throws PreconditionError when R_n > R_m.
SopEstimate sop_case1(const PairConfig& config, const NetworkGeometry& geometry,
                      const QuadratureConstants& constants, double abs_tol = math::kDefaultAbsTol);

// ---- phase 2, both messages secret (high-SNR model) --------------------------

double cdf_eve_coop_relay(double x, const DerivedScalars& scalars, double p_c);
double pdf_eve_coop_relay(double x, const DerivedScalars& scalars, double p_c);

/// Jammed eavesdropper SINR beta P_C G / (1 + (1 - beta) P_C G), maximised over
/// the eavesdroppers. Ceiling beta / (1 - beta); beta = 1 has no ceiling.
double cdf_eve_coop_fjr(double x, double beta, const DerivedScalars& scalars, double p_c);
double pdf_eve_coop_fjr(double x, double beta, const DerivedScalars& scalars, double p_c);

/// Weak user's jammed relay-link SINR CDF.
double cdf_weak_coop_fjr(double x, double beta, const QuadratureConstants& constants,
                         const PairConfig& config);

/// Weak-user SOP in the P_BS -> infinity model for the chosen strategy
/// (FJR uses config.beta).
SopEstimate sop_weak_high_snr(const PairConfig& config, const NetworkGeometry& geometry,
                              const QuadratureConstants& constants, CoopStrategy strategy,
                              double abs_tol = math::kDefaultAbsTol);

/// 1 - (1 - SOP_m)(1 - SOP_n). Throws PreconditionError when a_m^2 > 1/2^{2R_n}.
SopEstimate sop_case2(const PairConfig& config, const NetworkGeometry& geometry,
                      const QuadratureConstants& constants, CoopStrategy strategy,
                      double abs_tol = math::kDefaultAbsTol);

}  // namespace secnoma::analytic
