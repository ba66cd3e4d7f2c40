#include "secnoma/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace secnoma {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double uniform01(StreamRng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double unit_exponential(StreamRng& rng) { return std::exponential_distribution<double>(1.0)(rng); }

// Radius of a point uniform in area on the ring [inner, outer].
double ring_radius(double inner, double outer, double u) {
  return std::sqrt(inner * inner + u * (outer * outer - inner * inner));
}

Point polar(double radius, double angle) {
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

Point add(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }

}  // namespace

void NetworkGeometry::validate() const {
  require(r_p > 0.0, "geometry: r_p must be positive");
  require(r_p < r_l, "geometry: requires r_p < r_l");
  require(r_l < r_e, "geometry: requires r_l < r_e");
  require(alpha >= 2.0 && std::isfinite(alpha), "geometry: alpha must be >= 2");
  require(lambda_e >= 0.0 && std::isfinite(lambda_e), "geometry: lambda_e must be >= 0");
}

void PairConfig::validate() const {
  require(n_l >= 2, "pair: n_l must be at least 2");
  require(1 <= n && n < m && m <= n_l, "pair: requires 1 <= n < m <= n_l");
  require(a_m_sq > 0.0, "pair: a_m^2 must be positive");
  require(a_n_sq > a_m_sq, "pair: requires a_n > a_m");
  require(std::abs(a_m_sq + a_n_sq - 1.0) <= 1e-9, "pair: requires a_m^2 + a_n^2 = 1");
  require(p_bs > 0.0 && std::isfinite(p_bs), "pair: P_BS must be positive");
  require(p_c >= 0.0 && std::isfinite(p_c), "pair: P_C must be >= 0");
  require(r_m >= 0.0 && r_n >= 0.0, "pair: target rates must be >= 0");
  require(beta >= 0.0 && beta <= 1.0, "pair: beta must lie in [0, 1]");
  require(lambda_mn > 0.0, "pair: lambda_mn must be positive");
}

double SamplingMode::truncation_radius(const NetworkGeometry& geometry) const noexcept {
  return r_max > 0.0 ? r_max : 10.0 * geometry.r_e;
}

double SamplingMode::reference_intensity(const NetworkGeometry& geometry) const noexcept {
  return lambda_ref > 0.0 ? lambda_ref : geometry.lambda_e;
}

void SamplingMode::validate(const NetworkGeometry& geometry) const {
  require(r_max == 0.0 || r_max > geometry.r_e, "sampling: R_max must exceed r_e");
  require(lambda_ref == 0.0 || lambda_ref >= geometry.lambda_e,
          "sampling: coupling intensity must be >= lambda_e");
}

double distance(Point a, Point b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

double path_gain(double fade, double distance, double alpha) noexcept {
  return fade / (1.0 + std::pow(distance, alpha));
}

std::vector<double> ordered_gains(std::span<const double> distances, std::span<const double> fades,
                                  double alpha) {
  if (distances.size() != fades.size()) {
    throw std::invalid_argument("ordered_gains: size mismatch");
  }
  std::vector<double> gains(distances.size());
  for (std::size_t i = 0; i < gains.size(); ++i) gains[i] = path_gain(fades[i], distances[i], alpha);
  std::sort(gains.begin(), gains.end());
  return gains;
}

std::vector<UserSample> sample_users(const NetworkGeometry& geometry, const PairConfig& config,
                                     SamplingModeKind mode, StreamRng& rng) {
  const double inner = mode == SamplingModeKind::kPaperGeometry ? geometry.r_p : 0.0;
  std::vector<UserSample> users(static_cast<std::size_t>(config.n_l));
  for (UserSample& user : users) {
    const double r = ring_radius(inner, geometry.r_l, uniform01(rng));
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    user.position = polar(r, angle);
    user.fade = unit_exponential(rng);
    user.gain = path_gain(user.fade, r, geometry.alpha);
  }
  std::sort(users.begin(), users.end(),
            [](const UserSample& a, const UserSample& b) { return a.gain < b.gain; });
  return users;
}

std::vector<double> sample_user_channels(const NetworkGeometry& geometry, const PairConfig& config,
                                         SamplingModeKind mode, StreamRng& rng) {
  const auto users = sample_users(geometry, config, mode, rng);
  std::vector<double> gains;
  gains.reserve(users.size());
  for (const UserSample& u : users) gains.push_back(u.gain);
  return gains;
}

std::vector<Eavesdropper> sample_eavesdroppers(const NetworkGeometry& geometry,
                                               const SamplingMode& mode, Phase phase,
                                               std::optional<Point> strong_user_position,
                                               StreamRng& rng) {
  if (phase == Phase::kPhase2FromStrongUser && !strong_user_position) {
    throw std::invalid_argument("sample_eavesdroppers: phase 2 needs the strong-user position");
  }
  const double lambda_ref = mode.reference_intensity(geometry);
  if (lambda_ref <= 0.0) return {};

  Point centre{};
  double inner = geometry.r_l;
  double outer = geometry.r_e;
  if (mode.kind == SamplingModeKind::kAnalyticMatched) {
    outer = mode.truncation_radius(geometry);
    if (phase == Phase::kPhase1FromBS) {
      inner = geometry.r_p;
    } else {
      inner = 0.0;
      centre = *strong_user_position;
    }
  }

  const double area = std::numbers::pi * (outer * outer - inner * inner);
  const auto count = std::poisson_distribution<long long>(lambda_ref * area)(rng);
  const double keep = geometry.lambda_e / lambda_ref;

  std::vector<Eavesdropper> eves;
  eves.reserve(static_cast<std::size_t>(static_cast<double>(count) * keep) + 1);
  for (long long i = 0; i < count; ++i) {
    const double r = ring_radius(inner, outer, uniform01(rng));
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    const double mark = uniform01(rng);
    const double fade_bs = unit_exponential(rng);
    const double fade_strong = unit_exponential(rng);
    if (mark >= keep) continue;
    Eavesdropper e;
    e.position = add(centre, polar(r, angle));
    e.d_bs = std::hypot(e.position.x, e.position.y);
    e.d_strong = strong_user_position ? distance(e.position, *strong_user_position)
                                      : std::numeric_limits<double>::quiet_NaN();
    e.fade_bs = fade_bs;
    e.fade_strong = fade_strong;
    eves.push_back(e);
  }
  return eves;
}

PairLink sample_pair_link(const PairConfig& config, const NetworkGeometry& geometry,
                          StreamRng& rng) {
  auto disc_point = [&] {
    const double r = geometry.r_l * std::sqrt(uniform01(rng));
    return polar(r, 2.0 * std::numbers::pi * uniform01(rng));
  };
  const Point a = disc_point();
  const Point b = disc_point();
  PairLink link;
  link.distance = distance(a, b);
  link.fade = std::exponential_distribution<double>(config.lambda_mn)(rng);
  return link;
}

double pair_distance_pdf(double r, double r_l) noexcept {
  if (r < 0.0 || r > 2.0 * r_l) return 0.0;
  const double s = r / (2.0 * r_l);
  const double bracket = (2.0 / std::numbers::pi) * std::acos(s) -
                         (r / (std::numbers::pi * r_l)) * std::sqrt(std::max(0.0, 1.0 - s * s));
  return (2.0 * r / (r_l * r_l)) * bracket;
}

std::vector<double> shell_edges(double outer) {
  std::vector<double> edges{0.0};
  double edge = 0.5;
  while (edge < outer) {
    edges.push_back(edge);
    edge *= 1.25;
  }
  edges.push_back(outer);
  return edges;
}

double sample_strongest_path_gain(const RadialPpp& ppp, std::uint64_t master_seed,
                                  std::uint64_t trial, StreamId stream) {
  if (ppp.lambda <= 0.0 || ppp.lambda_ref <= 0.0) return 0.0;
  const double keep = ppp.lambda / ppp.lambda_ref;
  const auto edges = shell_edges(ppp.outer);
  double best = 0.0;

  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    const double lo = edges[j];
    const double hi = edges[j + 1];
    if (hi <= ppp.inner) continue;

    StreamRng rng(stream_seed(master_seed, trial, stream, j));
    const double mean = ppp.lambda_ref * std::numbers::pi * (hi * hi - lo * lo);
    const auto count = std::poisson_distribution<long long>(mean)(rng);
    if (count == 0) continue;

    // Largest of `count` unit exponentials: -log(1 - U^(1/count)).
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double top_fade = -std::log(-std::expm1(std::log(u) / static_cast<double>(count)));
    const double nearest = std::max(lo, ppp.inner);
    if (top_fade / (1.0 + std::pow(nearest, ppp.alpha)) <= best) continue;

    // The remaining fades are i.i.d. exponentials conditioned on <= top_fade.
    const double below_top = -std::expm1(-top_fade);
    for (long long i = 0; i < count; ++i) {
      const double r = ring_radius(lo, hi, uniform01(rng));
      const double mark = uniform01(rng);
      const double fade = i == 0 ? top_fade : -std::log1p(-uniform01(rng) * below_top);
      if (r < ppp.inner || mark >= keep) continue;
      best = std::max(best, path_gain(fade, r, ppp.alpha));
    }
  }
  return best;
}

}  // namespace secnoma
