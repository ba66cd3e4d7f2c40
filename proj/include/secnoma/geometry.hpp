#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "secnoma/random.hpp"

namespace secnoma {

/// Zones around the base station and the eavesdropper intensity.
/// Defaults are the reference scenario (r_p = 5 m, r_l = 10 m, r_e = 100 m).
struct NetworkGeometry {
  double r_p = 5.0;      // eavesdropper-free radius [m]
  double r_l = 10.0;     // user-zone outer radius [m]
  double r_e = 100.0;    // eavesdropper-zone outer radius [m]
  double alpha = 4.0;    // path-loss exponent
  double lambda_e = 1e-3;  // eavesdroppers per m^2

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
  double eta() const noexcept { return 2.0 / alpha; }
};

/// One NOMA pair. Orders are ascending: user k is the k-th smallest gain, so
/// the strong user has the larger index (n < m). Powers are linear with unit
/// noise variance; rates are in bits/s/Hz.
struct PairConfig {
  int n_l = 2;
  int m = 2;
  int n = 1;
  double a_m_sq = 0.4;
  double a_n_sq = 0.6;
  double p_bs = 1e6;
  double p_c = 100.0;
  double r_m = 0.1;
  double r_n = 0.1;
  double beta = 0.7;
  double lambda_mn = 1.0;

  void validate() const;
  /// SINR ceiling a_n^2 / a_m^2 of the weak message.
  double theta() const noexcept { return a_n_sq / a_m_sq; }
};

enum class SamplingModeKind {
  kPaperGeometry,    // users on [r_p, r_l], eavesdroppers on [r_l, r_e] in both phases
  kAnalyticMatched,  // users on the r_l disc, eavesdroppers on the regions the closed forms integrate
};

struct SamplingMode {
  SamplingModeKind kind = SamplingModeKind::kAnalyticMatched;
  /// Truncation radius for the unbounded eavesdropper regions; 0 selects 10 * r_e.
  double r_max = 0.0;
  /// Intensity the eavesdropper process is drawn at before independent
  /// thinning down to lambda_e. Runs sharing it share eavesdropper points,
  /// which couples sweeps over lambda_e. 0 selects lambda_e.
  double lambda_ref = 0.0;

  double truncation_radius(const NetworkGeometry& geometry) const noexcept;
  double reference_intensity(const NetworkGeometry& geometry) const noexcept;
  void validate(const NetworkGeometry& geometry) const;
};

enum class Phase { kPhase1FromBS, kPhase2FromStrongUser };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b) noexcept;

struct UserSample {
  Point position;
  double fade = 0.0;  // |g_BS,i|^2
  double gain = 0.0;  // |h_i|^2 = fade / (1 + d^alpha)
};

struct Eavesdropper {
  Point position;
  double d_bs = 0.0;
  double d_strong = 0.0;  // NaN when no strong-user position was supplied
  double fade_bs = 0.0;
  double fade_strong = 0.0;
};

struct PairLink {
  double distance = 0.0;  // d_mn
  double fade = 0.0;      // |g_mn|^2
};

/// One sampled world.
struct ChannelRealization {
  std::vector<double> ordered_user_gains;  // ascending
  double pair_distance = 0.0;
  double pair_fade = 0.0;
  std::vector<Eavesdropper> eavesdroppers;
};

/// fade / (1 + d^alpha).
double path_gain(double fade, double distance, double alpha) noexcept;

/// Gains fade_i / (1 + d_i^alpha), sorted ascending.
std::vector<double> ordered_gains(std::span<const double> distances, std::span<const double> fades,
                                  double alpha);

/// n_l users with unit-mean Rayleigh power fades, sorted ascending by gain.
std::vector<UserSample> sample_users(const NetworkGeometry& geometry, const PairConfig& config,
                                     SamplingModeKind mode, StreamRng& rng);

std::vector<double> sample_user_channels(const NetworkGeometry& geometry, const PairConfig& config,
                                         SamplingModeKind mode, StreamRng& rng);

/// Full point-set draw of the eavesdropper PPP for one phase. Every point
/// carries independent unit-mean exponential fades towards the BS and
/// towards the strong user.
std::vector<Eavesdropper> sample_eavesdroppers(const NetworkGeometry& geometry,
                                               const SamplingMode& mode, Phase phase,
                                               std::optional<Point> strong_user_position,
                                               StreamRng& rng);

/// Inter-user distance (two independent uniform points on the r_l disc) and
/// an exponential fade of rate lambda_mn.
PairLink sample_pair_link(const PairConfig& config, const NetworkGeometry& geometry,
                          StreamRng& rng);

/// Density of the distance between two uniform points on a disc of radius r_l.
double pair_distance_pdf(double r, double r_l) noexcept;

/// Ring [inner, outer] around some centre holding a PPP of intensity
/// `lambda`, generated at `lambda_ref` >= lambda and thinned.
struct RadialPpp {
  double inner = 0.0;
  double outer = 0.0;
  double lambda = 0.0;
  double lambda_ref = 0.0;
  double alpha = 4.0;
};

/// Radial shell edges shared by every RadialPpp draw: 0, 0.5, then a
/// geometric progression of ratio 1.25, clipped at `outer`.
std::vector<double> shell_edges(double outer);

/// Largest fade / (1 + d^alpha) over the points of `ppp`, or 0 if there are
/// none. Exact in law. Each radial shell draws from its own stream, first
/// its point count and the largest fade in it; the shell's points are only
/// materialised when that bound can beat the running maximum. Results for
/// different `inner` or `lambda` (same lambda_ref) are computed from the same
/// underlying points, so the maximum is monotone in both.
double sample_strongest_path_gain(const RadialPpp& ppp, std::uint64_t master_seed,
                                  std::uint64_t trial, StreamId stream);

}  // namespace secnoma
