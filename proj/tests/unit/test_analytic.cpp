#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "secnoma/analytic.hpp"
#include "secnoma/simulator.hpp"

using namespace secnoma;
using namespace secnoma::analytic;

namespace {

const QuadratureConstants& reference_constants() {
  static const QuadratureConstants c = QuadratureConstants::build(20, 10.0, 4.0);
  return c;
}

DerivedScalars reference_scalars() { return DerivedScalars::build(NetworkGeometry{}, PairConfig{}); }

NetworkGeometry no_eavesdroppers() {
  NetworkGeometry g;
  g.lambda_e = 0.0;
  return g;
}

sim::TrialSpec reference_spec() { return sim::TrialSpec{}; }

double empirical_at(const std::vector<double>& samples, double x) {
  return sim::EmpiricalCdf(samples)(x);
}

struct Frequency {
  double p;
  double se;
};

template <typename Pred>
Frequency mc_frequency(const sim::TrialSpec& spec, std::uint64_t n, std::uint64_t seed, Pred pred) {
  const std::uint64_t hits = sim::count_trials(n, 0, [&](std::uint64_t t) { return pred(t); });
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

}  // namespace

TEST(QuadratureConstants, ClosingTermsCancel) {
  for (int order : {1, 5, 20, 40}) {
    const auto c = QuadratureConstants::build(order, 10.0, 4.0);
    ASSERT_EQ(c.disc_weights.size(), static_cast<std::size_t>(order + 1));
    double sb = 0.0;
    double sB = 0.0;
    for (int k = 0; k <= order; ++k) {
      sb += c.disc_weights[k];
      sB += c.pair_weights[k];
    }
    EXPECT_NEAR(sb, 0.0, 1e-14);
    EXPECT_NEAR(sB, 0.0, 1e-13);
    EXPECT_EQ(c.disc_rates[0], 0.0);
    EXPECT_EQ(c.pair_rates[0], 0.0);
    for (int k = 1; k <= order; ++k) {
      EXPECT_GE(c.disc_rates[k], 1.0);
      EXPECT_GE(c.pair_rates[k], 1.0);
      EXPECT_LT(c.disc_weights[k], 0.0);
    }
  }
}

TEST(DerivedScalars, ReferenceValues) {
  const DerivedScalars s = reference_scalars();
  EXPECT_DOUBLE_EQ(s.eta, 0.5);
  EXPECT_NEAR(s.mu1, 0.5 * std::numbers::pi * 1e-3 * std::sqrt(4e5), 1e-12);
  EXPECT_NEAR(s.mu2, 625.0 / 4e5, 1e-15);
  EXPECT_NEAR(s.chi1, 0.5 * std::numbers::pi * 1e-3 * 10.0, 1e-15);
  EXPECT_NEAR(s.chi2, 0.5 * std::numbers::pi * std::sqrt(std::numbers::pi) * 1e-3, 1e-15);
  EXPECT_DOUBLE_EQ(s.theta, 1.5);
  EXPECT_NEAR(s.c_n_g, std::exp2(0.2), 1e-15);
  EXPECT_NEAR(s.zeta, (std::exp2(0.2) - 1.0) * 2.5, 1e-15);
}

TEST(SopKind, Names) {
  EXPECT_EQ(to_string(SopKind::kAnalyticExact), "analytic_exact");
  EXPECT_EQ(to_string(SopKind::kMonteCarlo), "monte_carlo");
}

TEST(EvePhase1, NoEavesdroppersMeansCdfOne) {
  const PairConfig c;
  const auto s = DerivedScalars::build(no_eavesdroppers(), c);
  for (double x : {1e-6, 0.5, 3.0, 1e4}) {
    EXPECT_EQ(cdf_eve_snr_phase1(x, s, c.p_bs, c.a_m_sq), 1.0);
    EXPECT_EQ(pdf_eve_snr_phase1(x, s, c.p_bs, c.a_m_sq), 0.0);
  }
  EXPECT_EQ(cdf_eve_snr_phase1_total(0.0, s, c.p_bs, c.a_m_sq), 1.0);
}

TEST(EvePhase1, DomainAndTotalVariant) {
  const PairConfig c;
  const auto s = reference_scalars();
  EXPECT_THROW(cdf_eve_snr_phase1(0.0, s, c.p_bs, c.a_m_sq), std::domain_error);
  EXPECT_THROW(pdf_eve_snr_phase1(-1.0, s, c.p_bs, c.a_m_sq), std::domain_error);
  EXPECT_EQ(cdf_eve_snr_phase1_total(0.0, s, c.p_bs, c.a_m_sq), 0.0);
  EXPECT_EQ(cdf_eve_snr_phase1_total(-2.0, s, c.p_bs, c.a_m_sq), 0.0);
  EXPECT_LT(cdf_eve_snr_phase1(1e-8, s, c.p_bs, c.a_m_sq), 1e-6);
  EXPECT_GT(cdf_eve_snr_phase1(1e9, s, c.p_bs, c.a_m_sq), 1.0 - 1e-9);
  EXPECT_GE(cdf_eve_snr_phase1(2.0, s, c.p_bs, c.a_m_sq), cdf_eve_snr_phase1(1.0, s, c.p_bs, c.a_m_sq));
}

TEST(EvePhase1, MatchesSimulationAtOne) {
  const PairConfig c;
  const auto samples = sim::sample_quantity(reference_spec(), sim::Quantity::kEveSnrPhase1, 100000, 21);
  EXPECT_NEAR(cdf_eve_snr_phase1(1.0, reference_scalars(), c.p_bs, c.a_m_sq), empirical_at(samples, 1.0),
              0.01);
}

TEST(EvePhase1, DensityMatchesDerivative) {
  const PairConfig c;
  const auto s = reference_scalars();
  const double h = 1e-4;
  for (double x : {0.5, 1.0, 5.0}) {
    const double fd = (cdf_eve_snr_phase1(x + h, s, c.p_bs, c.a_m_sq) -
                       cdf_eve_snr_phase1(x - h, s, c.p_bs, c.a_m_sq)) /
                      (2.0 * h);
    EXPECT_NEAR(pdf_eve_snr_phase1(x, s, c.p_bs, c.a_m_sq), fd, 1e-5) << x;
  }
}

TEST(EvePhase1, DensityHasUnitMass) {
  const PairConfig c;
  const auto s = reference_scalars();
  const double mass = math::integrate_semi_infinite(
      [&](double x) { return x > 0.0 ? pdf_eve_snr_phase1(x, s, c.p_bs, c.a_m_sq) : 0.0; }, 1e-9);
  EXPECT_NEAR(mass, 1.0, 1e-6);
}

TEST(OrderedUserGain, Limits) {
  const auto& q = reference_constants();
  const PairConfig c;
  EXPECT_NEAR(cdf_ordered_user_gain_snr(0.0, 2, 2, q, c.p_bs, c.a_m_sq), 0.0, 1e-8);
  EXPECT_NEAR(cdf_ordered_user_gain_snr(1e4 * c.p_bs * c.a_m_sq, 2, 2, q, c.p_bs, c.a_m_sq), 1.0, 1e-3);
  EXPECT_THROW(cdf_ordered_user_gain_snr(-1.0, 2, 2, q, c.p_bs, c.a_m_sq), std::domain_error);
}

TEST(OrderedUserGain, MatchesSimulationAtOne) {
  const auto& q = reference_constants();
  const PairConfig c;
  const auto samples = sim::sample_quantity(reference_spec(), sim::Quantity::kStrongUserSnr, 1000000, 22);
  EXPECT_NEAR(cdf_ordered_user_gain_snr(1.0, 2, 2, q, c.p_bs, c.a_m_sq), empirical_at(samples, 1.0),
              0.005);
}

TEST(OrderedUserGain, CollapsedSumEqualsCompositions) {
  const auto q = QuadratureConstants::build(8, 10.0, 4.0);
  for (int n_l = 1; n_l <= 4; ++n_l) {
    for (int order = 1; order <= n_l; ++order) {
      for (double z : {0.0, 1e-4, 3e-3, 0.05, 1.0}) {
        EXPECT_NEAR(ordered_gain_cdf_raw(z, order, n_l, q),
                    ordered_gain_cdf_by_compositions(z, order, n_l, q), 1e-11)
            << n_l << " " << order << " " << z;
      }
    }
  }
}

TEST(OrderedUserGain, SingleUserIsOrderOneOfOne) {
  const auto& q = reference_constants();
  for (double z : {0.0, 1e-3, 0.1}) {
    EXPECT_NEAR(ordered_gain_cdf_raw(z, 1, 1, q), single_user_gain_cdf_raw(z, q), 1e-14);
  }
}

TEST(OrderedUserGain, RejectsTooManyUsers) {
  const auto& q = reference_constants();
  EXPECT_THROW(ordered_gain_cdf_raw(0.1, 3, kMaxUsers + 1, q), CombinatorialLimitError);
  EXPECT_THROW(ordered_gain_cdf_raw(0.1, 0, 2, q), std::invalid_argument);
  EXPECT_THROW(ordered_gain_cdf_raw(0.1, 3, 2, q), std::invalid_argument);
  EXPECT_NO_THROW(ordered_gain_cdf_raw(0.1, 3, kMaxUsers, q));
}

TEST(StrongSecrecyOutage, NoEavesdroppersReducesToThreshold) {
  const PairConfig c;
  const auto& q = reference_constants();
  const double expected = cdf_ordered_user_gain_snr(std::exp2(2.0 * c.r_m) - 1.0, c.m, c.n_l, q,
                                                    c.p_bs, c.a_m_sq);
  EXPECT_NEAR(pr_strong_secrecy_outage(c, no_eavesdroppers(), q), expected, 1e-12);
}

TEST(StrongSecrecyOutage, MatchesSimulation) {
  const PairConfig c;
  const auto spec = reference_spec();
  const auto f = mc_frequency(spec, 100000, 23,
                              [&](std::uint64_t t) { return !sim::case1_events(spec, 23, t).e2; });
  EXPECT_NEAR(pr_strong_secrecy_outage(c, NetworkGeometry{}, reference_constants()), f.p, 3.0 * f.se);
}

TEST(StrongSecrecyOutage, ZeroRateIsEavesdropperBeatingUser) {
  auto spec = reference_spec();
  spec.config.r_m = 0.0;
  spec.config.r_n = 0.0;
  const auto f = mc_frequency(spec, 100000, 24, [&](std::uint64_t t) {
    const auto q = sim::sample_trial_quantities(spec, 24, t);
    return q.eve_snr_phase1 > q.strong_snr;
  });
  const double analytic = pr_strong_secrecy_outage(spec.config, spec.geometry, reference_constants());
  EXPECT_GT(analytic, 0.0);
  EXPECT_NEAR(analytic, f.p, 3.0 * f.se);
}

TEST(WeakPhase1, CeilingAndOrigin) {
  const PairConfig c;
  const auto& q = reference_constants();
  EXPECT_EQ(cdf_weak_user_phase1_sinr(c.theta(), q, c), 1.0);
  EXPECT_EQ(cdf_weak_user_phase1_sinr(10.0, q, c), 1.0);
  EXPECT_NEAR(cdf_weak_user_phase1_sinr(0.0, q, c), 0.0, 1e-8);
  EXPECT_THROW(cdf_weak_user_phase1_sinr(-1.0, q, c), std::domain_error);
}

TEST(WeakPhase1, MatchesSimulationAtOne) {
  const PairConfig c;
  const auto samples = sim::sample_quantity(reference_spec(), sim::Quantity::kWeakUserSinr, 1000000, 25);
  EXPECT_NEAR(cdf_weak_user_phase1_sinr(1.0, reference_constants(), c), empirical_at(samples, 1.0), 0.005);
}

TEST(CoopLink, OriginAndSimulation) {
  const PairConfig c;
  const auto& q = reference_constants();
  EXPECT_NEAR(cdf_coop_link_snr(0.0, q, c), 0.0, 1e-8);
  const auto samples = sim::sample_quantity(reference_spec(), sim::Quantity::kCoopLinkSnr, 1000000, 26);
  EXPECT_NEAR(cdf_coop_link_snr(c.p_c, q, c), empirical_at(samples, c.p_c), 0.005);
}

TEST(CoopLink, DensityMatchesDerivative) {
  const PairConfig c;
  const auto& q = reference_constants();
  for (double y : {0.1 * c.p_c, c.p_c}) {
    const double h = 1e-4 * y;
    const double fd = (cdf_coop_link_snr(y + h, q, c) - cdf_coop_link_snr(y - h, q, c)) / (2.0 * h);
    EXPECT_NEAR(pdf_coop_link_snr(y, q, c), fd, 1e-5) << y;
  }
}

TEST(WeakCombinedOutage, ZeroRateIsZero) {
  PairConfig c;
  c.r_n = 0.0;
  EXPECT_EQ(pr_weak_combined_outage(c, NetworkGeometry{}, reference_constants()), 0.0);
}

TEST(WeakCombinedOutage, VanishingRelayPower) {
  PairConfig c;
  c.p_c = 1e-12;
  const auto& q = reference_constants();
  EXPECT_NEAR(pr_weak_combined_outage(c, NetworkGeometry{}, q),
              cdf_weak_user_phase1_sinr(std::exp2(2.0 * c.r_n) - 1.0, q, c), 1e-8);
}

TEST(WeakCombinedOutage, MatchesSimulation) {
  const PairConfig c;
  const auto spec = reference_spec();
  const auto f = mc_frequency(spec, 100000, 27, [&](std::uint64_t t) {
    const auto q = sim::sample_trial_quantities(spec, 27, t);
    return 0.5 * std::log2(1.0 + q.weak_sinr + q.coop_snr) < c.r_n;
  });
  EXPECT_NEAR(pr_weak_combined_outage(c, NetworkGeometry{}, reference_constants()), f.p,
              std::max(3.0 * f.se, 3e-4));
}

TEST(SopCase1, ReferenceIsExactRegime) {
  const PairConfig c;
  EXPECT_GE(1.0 / (std::exp2(0.2) + 1.0), c.a_m_sq);
  const auto e = sop_case1(c, NetworkGeometry{}, reference_constants());
  EXPECT_EQ(e.kind, SopKind::kAnalyticExact);
  EXPECT_FALSE(e.stderr_.has_value());
  EXPECT_EQ(e.metadata.quadrature_order, 20);
  EXPECT_GT(e.value, 0.0);
  EXPECT_LT(e.value, 1.0);
}

TEST(SopCase1, Regimes) {
  const auto& q = reference_constants();
  PairConfig c;
  c.a_m_sq = 0.48;
  c.a_n_sq = 0.52;
  EXPECT_EQ(sop_case1(c, NetworkGeometry{}, q).kind, SopKind::kAnalyticLowerBound);

  c = PairConfig{};
  c.r_n = 0.6;
  c.r_m = 0.6;
  c.a_m_sq = 0.45;
  c.a_n_sq = 0.55;
  const auto sic_impossible = sop_case1(c, NetworkGeometry{}, q);
  EXPECT_EQ(sic_impossible.value, 1.0);
  EXPECT_EQ(sic_impossible.kind, SopKind::kAnalyticExact);

  c = PairConfig{};
  c.r_n = 0.2;
  EXPECT_THROW(sop_case1(c, NetworkGeometry{}, q), PreconditionError);
}

TEST(SopCase1, NoEavesdroppersAndZeroWeakRate) {
  PairConfig c;
  c.r_n = 0.0;
  const auto& q = reference_constants();
  const double expected =
      cdf_ordered_user_gain_snr(std::exp2(2.0 * c.r_m) - 1.0, c.m, c.n_l, q, c.p_bs, c.a_m_sq);
  EXPECT_NEAR(sop_case1(c, no_eavesdroppers(), q).value, expected, 1e-12);
}

TEST(SopCase1, MatchesSimulation) {
  const auto spec = reference_spec();
  const auto mc = sim::estimate_sop(spec, 100000, 42);
  const auto e = sop_case1(spec.config, spec.geometry, reference_constants());
  EXPECT_NEAR(e.value, mc.estimate, std::max(0.02, 3.0 * mc.stderr_));
  EXPECT_NEAR(e.value, mc.estimate, 3.0 * mc.stderr_);
}

TEST(EveCoopRelay, LimitsAndDerivative) {
  const PairConfig c;
  const auto s = reference_scalars();
  const auto none = DerivedScalars::build(no_eavesdroppers(), c);
  EXPECT_EQ(cdf_eve_coop_relay(0.3, none, c.p_c), 1.0);
  EXPECT_THROW(cdf_eve_coop_relay(0.0, s, c.p_c), std::domain_error);
  const double h = 1e-4;
  for (double x : {0.5, 2.0}) {
    const double fd = (cdf_eve_coop_relay(x + h, s, c.p_c) - cdf_eve_coop_relay(x - h, s, c.p_c)) / (2 * h);
    EXPECT_NEAR(pdf_eve_coop_relay(x, s, c.p_c), fd, 1e-5) << x;
  }
}

TEST(EveCoopFjr, CeilingAndRelayLimit) {
  const PairConfig c;
  const auto s = reference_scalars();
  const double ceiling = 0.7 / 0.3;
  EXPECT_EQ(cdf_eve_coop_fjr(ceiling, 0.7, s, c.p_c), 1.0);
  EXPECT_EQ(cdf_eve_coop_fjr(5.0, 0.7, s, c.p_c), 1.0);
  EXPECT_EQ(pdf_eve_coop_fjr(5.0, 0.7, s, c.p_c), 0.0);
  for (double x : {0.01, 0.3, 1.0, 4.0, 50.0}) {
    EXPECT_NEAR(cdf_eve_coop_fjr(x, 1.0, s, c.p_c), cdf_eve_coop_relay(x, s, c.p_c), 1e-13) << x;
    EXPECT_NEAR(pdf_eve_coop_fjr(x, 1.0, s, c.p_c), pdf_eve_coop_relay(x, s, c.p_c),
                1e-10 * std::max(1.0, pdf_eve_coop_relay(x, s, c.p_c)))
        << x;
  }
  EXPECT_THROW(cdf_eve_coop_fjr(1.0, 0.0, s, c.p_c), std::domain_error);
  EXPECT_THROW(cdf_eve_coop_fjr(0.0, 0.7, s, c.p_c), std::domain_error);
}

TEST(EveCoopFjr, MatchesSimulationAtOne) {
  const PairConfig c;
  auto spec = reference_spec();
  spec.scenario = sim::Scenario::kCase2Fjr;
  const auto samples = sim::sample_quantity(spec, sim::Quantity::kEveCoopFjrSinr, 100000, 28);
  EXPECT_NEAR(cdf_eve_coop_fjr(1.0, 0.7, reference_scalars(), c.p_c), empirical_at(samples, 1.0), 0.01);
}

TEST(WeakCoopFjr, OriginCeilingAndRelayLimit) {
  const PairConfig c;
  const auto& q = reference_constants();
  EXPECT_NEAR(cdf_weak_coop_fjr(0.0, 0.7, q, c), 0.0, 1e-8);
  EXPECT_EQ(cdf_weak_coop_fjr(0.7 / 0.3, 0.7, q, c), 1.0);
  for (double x : {0.0, 0.5, 10.0, 300.0}) {
    EXPECT_NEAR(cdf_weak_coop_fjr(x, 1.0, q, c), cdf_coop_link_snr(x, q, c), 1e-14) << x;
  }
}

TEST(WeakCoopFjr, MatchesSimulationAtHalf) {
  const PairConfig c;
  auto spec = reference_spec();
  spec.scenario = sim::Scenario::kCase2Fjr;
  const auto samples = sim::sample_quantity(spec, sim::Quantity::kWeakCoopFjrSinr, 1000000, 29);
  EXPECT_NEAR(cdf_weak_coop_fjr(0.5, 0.7, reference_constants(), c), empirical_at(samples, 0.5), 0.005);
}

TEST(SopWeak, CeilingBelowThresholdIsCertainOutage) {
  PairConfig c;
  c.r_n = 0.5;
  c.r_m = 0.5;
  const auto s = DerivedScalars::build(NetworkGeometry{}, c);
  ASSERT_LE(s.theta, s.zeta);
  for (auto strategy : {CoopStrategy::kRelay, CoopStrategy::kFriendlyJammerRelay}) {
    EXPECT_EQ(sop_weak_high_snr(c, NetworkGeometry{}, reference_constants(), strategy).value, 1.0);
    EXPECT_EQ(sop_case2(c, NetworkGeometry{}, reference_constants(), strategy).value, 1.0);
  }
}

TEST(SopWeak, NoEavesdroppers) {
  const PairConfig c;
  const auto& q = reference_constants();
  const auto s = DerivedScalars::build(NetworkGeometry{}, c);
  const double relay = cdf_coop_link_snr(s.zeta, q, c);
  const double fjr = cdf_weak_coop_fjr(s.zeta, c.beta, q, c);
  EXPECT_NEAR(sop_weak_high_snr(c, no_eavesdroppers(), q, CoopStrategy::kRelay).value, relay, 1e-10);
  EXPECT_NEAR(sop_weak_high_snr(c, no_eavesdroppers(), q, CoopStrategy::kFriendlyJammerRelay).value, fjr,
              1e-10);
  const double strong = cdf_ordered_user_gain_snr(std::exp2(2.0 * c.r_m) - 1.0, c.m, c.n_l, q, c.p_bs,
                                                  c.a_m_sq);
  const auto sop = sop_case2(c, no_eavesdroppers(), q, CoopStrategy::kRelay);
  EXPECT_EQ(sop.kind, SopKind::kAnalyticUpperBound);
  EXPECT_NEAR(sop.value, 1.0 - (1.0 - strong) * (1.0 - relay), 1e-10);
}

TEST(SopWeak, RelayMatchesHighSnrSimulation) {
  auto spec = reference_spec();
  spec.scenario = sim::Scenario::kCase2Relay;
  const auto mc = sim::estimate_sop(spec, 100000, 30);
  const auto e = sop_weak_high_snr(spec.config, spec.geometry, reference_constants(), CoopStrategy::kRelay);
  EXPECT_EQ(e.kind, SopKind::kAnalyticUpperBound);
  EXPECT_NEAR(e.value, mc.estimate, 3.0 * mc.stderr_);
}

TEST(SopCase2, Precondition) {
  PairConfig c;
  c.r_n = 0.6;
  c.r_m = 0.6;
  c.a_m_sq = 0.45;
  c.a_n_sq = 0.55;
  EXPECT_THROW(sop_case2(c, NetworkGeometry{}, reference_constants(), CoopStrategy::kRelay),
               PreconditionError);
}

TEST(SopCase2, JammingBeatsRelayingAtHighRelayPower) {
  // The two strategies cross between 40 and 45 dB of P_C.
  PairConfig c;
  const auto& q = reference_constants();
  for (double p_c_db : {40.0, 45.0, 50.0, 60.0}) {
    c.p_c = std::pow(10.0, p_c_db / 10.0);
    const double relay = sop_case2(c, NetworkGeometry{}, q, CoopStrategy::kRelay).value;
    const double fjr = sop_case2(c, NetworkGeometry{}, q, CoopStrategy::kFriendlyJammerRelay).value;
    if (p_c_db < 45.0) {
      EXPECT_GT(fjr, relay) << p_c_db;
    } else {
      EXPECT_LT(fjr, relay) << p_c_db;
    }
  }
}

TEST(Diagnostics, ClampReportsOnlyOutsideSlack) {
  reset_diagnostic_count();
  std::vector<double> seen;
  set_diagnostic_handler([&](std::string_view, double raw) { seen.push_back(raw); });
  EXPECT_EQ(clamp_probability(1.0 + 1e-7, "test"), 1.0);
  EXPECT_EQ(clamp_probability(-1e-7, "test"), 0.0);
  EXPECT_EQ(diagnostic_count(), 0u);
  EXPECT_EQ(clamp_probability(1.01, "test"), 1.0);
  EXPECT_EQ(clamp_probability(-0.2, "test"), 0.0);
  EXPECT_EQ(diagnostic_count(), 2u);
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0], 1.01);
  EXPECT_EQ(clamp_probability(0.3, "test"), 0.3);
  EXPECT_THROW(clamp_probability(NAN, "test"), std::runtime_error);
  set_diagnostic_handler({});
  reset_diagnostic_count();
}
