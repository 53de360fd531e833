#include <gtest/gtest.h>

#include <cmath>

#include "pblab/attractor.hpp"
#include "pblab/errors.hpp"
#include "pblab/scenario.hpp"

using namespace pblab;

namespace {

HistorySegment constant_segment(double value) {
  HistorySegment s(1, 0.1, 10, -1.0);
  const double d = 0.0;
  for (int n = 0; n <= 10; ++n) s.push(n, &value, &d);
  return s;
}

Scenario zero_scenario() {
  Scenario s = default_scenario("cubic-delayed");
  s.spec.forcing = Forcing{};
  s.spec.initial_history = InitialHistory{};
  return s;
}

}  // namespace

TEST(Semidistance, Examples) {
  const EigenData e = eigenvalues(DomainSpec{M_PI, 1});
  const TimeProfile eps = TimeProfile::constant(1.0, 1.0);
  const std::vector<HistorySegment> zero{constant_segment(0.0)};
  const std::vector<HistorySegment> one{constant_segment(1.0)};
  const std::vector<HistorySegment> both{constant_segment(0.0), constant_segment(1.0)};
  EXPECT_EQ(semidistance(one, one, SegmentNorm::c_l2, e, eps), 0.0);
  EXPECT_DOUBLE_EQ(semidistance(zero, one, SegmentNorm::c_l2, e, eps), 1.0);
  EXPECT_EQ(semidistance(one, both, SegmentNorm::c_ht, e, eps), 0.0);
  EXPECT_GT(semidistance(both, one, SegmentNorm::c_ht, e, eps), 0.0);
  EXPECT_THROW(semidistance({}, one, SegmentNorm::c_l2, e, eps), EmptySet);
}

TEST(Sampling, HitsTargetNormAndIsDeterministic) {
  const Scenario s = default_scenario("cubic-delayed");
  const InitialHistory a = sample_history(s.spec, s.solver, 0.0, 7.5, 42, 1, 3);
  const InitialHistory b = sample_history(s.spec, s.solver, 0.0, 7.5, 42, 1, 3);
  const InitialHistory c = sample_history(s.spec, s.solver, 0.0, 7.5, 42, 1, 4);
  EXPECT_NEAR(history_norm_sq(s.spec, s.solver, 0.0, a), 7.5, 1e-12);
  ASSERT_EQ(a.modes.size(), b.modes.size());
  for (std::size_t j = 0; j < a.modes.size(); ++j) {
    EXPECT_EQ(a.modes[j].constant, b.modes[j].constant);
    EXPECT_EQ(a.modes[j].slope, b.modes[j].slope);
  }
  EXPECT_NE(a.modes[0].constant, c.modes[0].constant);
}

TEST(Ensemble, ZeroScenarioEndsAtZero) {
  Scenario s = zero_scenario();
  s.spec.nonlinearity.c0 = 0.0;  // rho^2 = 0, so every sample is the zero history
  const EnsembleRun run = pullback_ensemble(s.spec, s.solver, 0.0, {-2.0}, 1, 5);
  ASSERT_EQ(run.members.size(), 1u);
  EXPECT_EQ(run.members[0].endpoint_c_ht_sq, 0.0);
}

TEST(Ensemble, OrderingAndSphereSamples) {
  const Scenario s = default_scenario("cubic-delayed");
  const EnsembleRun run = pullback_ensemble(s.spec, s.solver, 0.0, {-2.0, -3.0}, 3, 9);
  ASSERT_EQ(run.members.size(), 6u);
  for (std::size_t i = 0; i < run.members.size(); ++i) {
    const EnsembleMember& m = run.members[i];
    EXPECT_EQ(m.tau_index, static_cast<int>(i / 3));
    EXPECT_EQ(m.sample_id, static_cast<int>(i % 3));
    const double rho = run.rho_sq_tau[m.tau_index];
    if (m.sample_id % 2 == 0)
      EXPECT_NEAR(m.initial_c_ht_sq, rho, 1e-9 * rho);
    else
      EXPECT_LE(m.initial_c_ht_sq, rho * (1 + 1e-12));
    EXPECT_EQ(m.endpoint.latest_time(), 0.0);
  }
}

TEST(Ensemble, ParallelMatchesSerial) {
  const Scenario s = default_scenario("cubic-delayed");
  EnsembleOptions ser;
  ser.parallel = false;
  const EnsembleRun a = pullback_ensemble(s.spec, s.solver, 0.0, {-2.0}, 4, 9, ser);
  const EnsembleRun b = pullback_ensemble(s.spec, s.solver, 0.0, {-2.0}, 4, 9);
  for (std::size_t i = 0; i < a.members.size(); ++i)
    EXPECT_EQ(a.members[i].endpoint_c_ht_sq, b.members[i].endpoint_c_ht_sq);
}

TEST(Ensemble, RejectsBadTaus) {
  const Scenario s = default_scenario("cubic-delayed");
  EXPECT_THROW(pullback_ensemble(s.spec, s.solver, 0.0, {-0.5}, 1, 1), ConfigError);
  EXPECT_THROW(pullback_ensemble(s.spec, s.solver, 0.0, {-3.0, -2.0}, 1, 1), ConfigError);
}

TEST(Ensemble, LinearModeContractsAtClosedFormRate) {
  const Scenario s = default_scenario("linear-single-mode");
  const EnsembleRun run = pullback_ensemble(s.spec, s.solver, 0.0, {-3.0}, 2, 1);
  for (const EnsembleMember& m : run.members) {
    // the endpoint window max sits at its oldest node t - k = -1, two time
    // units after tau; |u(tau)| is at most the initial window max
    const double decay = std::exp(-1.5 * 2.0);
    EXPECT_LE(m.endpoint_c_ht_sq, m.initial_c_ht_sq * decay * decay * (1 + 1e-9));
    EXPECT_GT(m.endpoint_c_ht_sq, 0.0);
  }
}

TEST(Attractor, ZeroScenarioIsOrigin) {
  Scenario s = zero_scenario();
  s.spec.nonlinearity.c0 = 0.0;
  const auto a = attractor_approximation(s.spec, s.solver, 0.0, -3.0, 2, 1);
  const EigenData e = eigenvalues(s.spec.domain);
  for (const HistorySegment& seg : a)
    EXPECT_EQ(sup_norm(seg, SegmentNorm::c_ht, e, s.spec.epsilon), 0.0);
}

TEST(Split, Examples) {
  const EigenData e = eigenvalues(DomainSpec{M_PI, 4});
  const std::vector<double> probes{0.0, 0.5, 1.0};
  Forcing one;
  one.modes = {ForcingMode{0.5, 0.0, 0.0, 0.0}};
  const ForcingSplit big = split_forcing(one, 1.0, e, probes);
  EXPECT_EQ(big.kept_modes, 0);
  EXPECT_TRUE(big.kept.is_zero());
  const ForcingSplit small = split_forcing(one, 0.1, e, probes);
  EXPECT_EQ(small.kept_modes, 1);
  EXPECT_TRUE(small.remainder.is_zero());
  // remainder norms: dropping mode 2 leaves 0.05 in L2, keeping nothing
  // leaves at least 0.3
  Forcing two;
  two.modes = {ForcingMode{0.3, 0.0, 0.0, 0.0}, ForcingMode{0.05, 0.0, 0.0, 0.0}};
  const ForcingSplit s2 = split_forcing(two, 0.1, e, probes);
  EXPECT_EQ(s2.kept_modes, 1);
  EXPECT_LT(s2.worst_remainder, 0.1);
  EXPECT_THROW(split_forcing(two, 0.0, e, probes), CannotSplit);
}

TEST(Split, DefaultThetaFallsBackForZeroForcing) {
  const EigenData e = eigenvalues(DomainSpec{M_PI, 4});
  EXPECT_EQ(default_theta(Forcing{}, e, {0.0}), 1e-2);
}

TEST(Regularity, SuperpositionAndBounds) {
  const Scenario s = default_scenario("cubic-delayed");
  const RegularityReport r = solve_decomposed(s.spec, s.solver, 0.0, 2.0, s.spec.initial_history);
  EXPECT_LT(r.max_superposition_err, 1e-8);
  EXPECT_DOUBLE_EQ(r.rho1, 3.0 / 2.0);
  for (const RegularityRow& row : r.rows) {
    EXPECT_LE(row.i1, row.i1_bound * (1 + 1e-9) + 1e-9);
    EXPECT_LE(row.i2, row.i2_bound * (1 + 1e-9) + 1e-9);
  }
  EXPECT_DOUBLE_EQ(r.r2, r.rows.back().i2_bound);
  EXPECT_NEAR(r.r2, regularity_radius(s.spec, s.solver, 0.0, 2.0), 1e-12 * r.r2);
}

TEST(Regularity, LiteralDecayFormFailsAtInitialTime) {
  // e^{-rho1 (t + k - tau)} at t = tau already discounts ||phi||^2, but
  // I1(tau) = ||phi||^2 in the composite norm.
  Scenario s = default_scenario("cubic-delayed");
  RegularityOptions o;
  o.theta = 1e-3;
  const RegularityReport r = solve_decomposed(s.spec, s.solver, 0.0, 0.2, s.spec.initial_history, o);
  EXPECT_GT(r.rows.front().i1, r.rows.front().i1_bound_literal);
  EXPECT_LE(r.rows.front().i1, r.rows.front().i1_bound);
}

TEST(Regularity, ZeroScenarioStaysZero) {
  Scenario s = zero_scenario();
  const RegularityReport r = solve_decomposed(s.spec, s.solver, 0.0, 1.0, s.spec.initial_history);
  for (const RegularityRow& row : r.rows) {
    EXPECT_EQ(row.i1, 0.0);
    EXPECT_EQ(row.i2, 0.0);
  }
}

TEST(Regularity, HugeThetaKeepsNoForcing) {
  const Scenario s = default_scenario("cubic-delayed");
  RegularityOptions o;
  o.theta = 1e6;
  const RegularityReport r = solve_decomposed(s.spec, s.solver, 0.0, 0.5, s.spec.initial_history, o);
  EXPECT_EQ(r.split.kept_modes, 0);
  EXPECT_LT(r.max_superposition_err, 1e-8);
}

TEST(Absorption, LargeDataEntersBeforeBound) {
  const Scenario s = default_scenario("cubic-delayed");
  const InitialHistory phi = sample_history(s.spec, s.solver, 0.0, 400.0, 3, 0, 0);
  const AbsorptionReport r = absorption_entry(s.spec, s.solver, 0.0, phi);
  EXPECT_TRUE(r.entered);
  EXPECT_TRUE(r.within_bound);
  EXPECT_GE(r.entry_time, 0.0);
}
