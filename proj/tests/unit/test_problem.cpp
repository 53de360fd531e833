#include <gtest/gtest.h>

#include <cmath>

#include "pblab/errors.hpp"
#include "pblab/problem.hpp"
#include "pblab/scenario.hpp"

using namespace pblab;

namespace {

ProblemSpec cubic() { return default_scenario("cubic-delayed").spec; }

const HypothesisCheck& check(const AuditReport& r, const std::string& name) {
  const HypothesisCheck* c = r.find(name);
  EXPECT_NE(c, nullptr) << name;
  return *c;
}

}  // namespace

TEST(Audit, CubicReactionPasses) {
  ProblemSpec p = cubic();
  const AuditReport r = audit(p);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(check(r, "nonlinearity-growth").passed);
  EXPECT_TRUE(check(r, "nonlinearity-one-sided-lipschitz").passed);
}

TEST(Audit, ConstantDiffusionTwoWithBoundOneFailsCoercivity) {
  ProblemSpec p = cubic();
  p.diffusion = DiffusionLaw::constant(2.0);
  p.epsilon = TimeProfile::constant(1.0, 1.0);
  const AuditReport r = audit(p);
  EXPECT_FALSE(check(r, "diffusion-coercivity").passed);
  // threshold (3 + L + sup eps') / 2 = 2
  EXPECT_DOUBLE_EQ(check(r, "diffusion-coercivity").limit, 2.0);
}

TEST(Audit, ZeroDelayPassesDelayChecks) {
  ProblemSpec p = cubic();
  p.delay = DelayKernel::discrete(1.0, 1.0, 0.0, 0.0);
  const AuditReport r = audit(p);
  EXPECT_TRUE(check(r, "delay-zero").passed);
  EXPECT_TRUE(check(r, "delay-lipschitz").passed);
  EXPECT_TRUE(check(r, "delay-lag").passed);
}

TEST(Audit, DeclaredLipschitzBelowTapSumFails) {
  ProblemSpec p = cubic();
  p.delay = p.delay.with_lipschitz(0.2);
  EXPECT_FALSE(check(audit(p), "delay-lipschitz").passed);
}

TEST(Audit, GrowthViolationIsNamed) {
  ProblemSpec p = cubic();
  p.nonlinearity.c2 = 2.0;
  try {
    require_admissible(p);
    FAIL() << "expected HypothesisViolation";
  } catch (const HypothesisViolation& e) {
    EXPECT_EQ(e.name(), "nonlinearity-growth");
  }
}

TEST(Audit, DeterministicForSameSeed) {
  ProblemSpec p = cubic();
  const AuditReport a = audit(p), b = audit(p);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].worst, b.checks[i].worst);
    EXPECT_EQ(a.checks[i].witness, b.checks[i].witness);
  }
}

TEST(Audit, EpsilonBelowFloorRejected) {
  ProblemSpec p = cubic();
  p.epsilon = TimeProfile::constant(1e-8, 1.0);
  EXPECT_FALSE(check(audit(p), "epsilon-positive").passed);
}

TEST(Audit, HeavyForcingTailRejected) {
  ProblemSpec p = cubic();
  p.forcing.tail_amplitude = 1.0;
  p.forcing.tail_exponent = 0.6;
  EXPECT_FALSE(check(audit(p), "forcing-finite").passed);
}

TEST(TimeProfile, TanhMonotonicity) {
  const TimeProfile dec = TimeProfile::decreasing_tanh(0.5, 1.57);
  const TimeProfile inc = TimeProfile::increasing_tanh(0.5, 1.07);
  for (double t = -40.0; t <= 40.0; t += 0.01) {
    EXPECT_LE(dec.derivative(t), 0.0);
    EXPECT_GE(inc.derivative(t), 0.0);
    EXPECT_LE(std::abs(dec.value(t)), 1.5);
  }
  EXPECT_NEAR(dec.value(0.0), 1.25, 1e-15);
}

TEST(TimeProfile, DerivativeMatchesDifferenceQuotient) {
  const TimeProfile dec = TimeProfile::decreasing_tanh(0.5, 1.57, 0.3, 2.0);
  const double h = 1e-6;
  for (double t : {-3.0, 0.0, 1.7}) {
    const double fd = (dec.value(t + h) - dec.value(t - h)) / (2 * h);
    EXPECT_NEAR(dec.derivative(t), fd, 1e-8);
  }
}

TEST(TimeProfile, CustomSampledInterpolatesSamples) {
  const TimeProfile e = TimeProfile::custom_sampled({{0.0, 1.0}, {1.0, 1.2}, {2.0, 1.1}}, 1.5);
  EXPECT_DOUBLE_EQ(e.value(1.0), 1.2);
  EXPECT_DOUBLE_EQ(e.value(-5.0), 1.0);
  EXPECT_DOUBLE_EQ(e.value(7.0), 1.1);
}

TEST(Diffusion, RationalLipschitzIsSharp) {
  const DiffusionLaw a = DiffusionLaw::rational(2.5, 4.0, 1.0);
  double worst = 0.0;
  for (double s = -5.0; s <= 5.0; s += 1e-4)
    worst = std::max(worst, std::abs(a.value(s + 1e-6) - a.value(s - 1e-6)) / 2e-6);
  EXPECT_NEAR(a.lipschitz_on(10.0), worst, 1e-6);
  EXPECT_DOUBLE_EQ(a.value(0.0), 2.5);
}

TEST(Nonlinearity, AntiderivativeAndDerivative) {
  Nonlinearity f;
  f.coefficients = {0.0, 1.0, 0.0, -1.0};
  EXPECT_DOUBLE_EQ(f.value(2.0), -6.0);
  EXPECT_DOUBLE_EQ(f.derivative(2.0), -11.0);
  EXPECT_DOUBLE_EQ(f.antiderivative(2.0), 2.0 - 4.0);
  EXPECT_EQ(f.degree(), 3);
  EXPECT_FALSE(f.is_linear());
  Nonlinearity g;
  g.coefficients = {0.0, -2.0};
  EXPECT_TRUE(g.is_linear());
  EXPECT_DOUBLE_EQ(g.linear_coefficient(), -2.0);
}

TEST(Nonlinearity, PotentialConstantsBoundAntiderivative) {
  const Nonlinearity f = cubic().nonlinearity;
  const PotentialConstants pc = derive_potential_constants(f);
  for (double u = -50.0; u <= 50.0; u += 0.01) {
    const double F = f.antiderivative(u), up = std::pow(std::abs(u), f.p);
    EXPECT_LE(F, pc.c0 - pc.c2 * up + 1e-9 * (1 + std::abs(F)));
    EXPECT_GE(F, -pc.c0 - pc.c1 * up - 1e-9 * (1 + std::abs(F)));
  }
}

TEST(Delay, DistributedTapsIntegrateKernel) {
  const DelayKernel g = DelayKernel::distributed(1.0, {1.0, 1.0, 1.0, 1.0, 1.0}, 1.0);
  double sum = 0.0;
  for (const DelayTap& t : g.taps(0.0)) sum += t.weight;
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_NEAR(g.intrinsic_lipschitz(), 1.0, 1e-15);
}

TEST(Delay, VariableLagStaysInWindow) {
  const DelayKernel g = DelayKernel::variable(1.0, 0.7, 0.2, 3.0, 0.3, 0.09);
  for (double t = -10.0; t <= 10.0; t += 0.1) {
    EXPECT_LE(g.lag_at(t), 1.0);
    EXPECT_GE(g.lag_at(t), 0.0);
  }
}

TEST(Forcing, RestrictionSplitsModes) {
  const Forcing h = cubic().forcing;
  const Forcing lo = h.restricted(1, 1), hi = h.restricted(2, 100);
  for (int j = 1; j <= 4; ++j)
    EXPECT_DOUBLE_EQ(lo.coefficient(j, 0.3) + hi.coefficient(j, 0.3), h.coefficient(j, 0.3));
}

TEST(Domain, RejectsBadValues) {
  EXPECT_THROW((DomainSpec{-1.0, 4}.validate()), ConfigError);
  EXPECT_THROW((DomainSpec{1.0, 0}.validate()), ConfigError);
}
