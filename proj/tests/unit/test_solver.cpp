#include <gtest/gtest.h>

#include <cmath>

#include "pblab/errors.hpp"
#include "pblab/scenario.hpp"
#include "pblab/solver.hpp"

using namespace pblab;

namespace {

// N = 1, a = 3, eps = 1, lambda1 = 1, everything else zero
ProblemSpec single_mode() { return default_scenario("linear-single-mode").spec; }

HistorySegment constant_segment(double value, double window) {
  HistorySegment s(1, 0.01, static_cast<int>(std::lround(window / 0.01)), -window);
  const double d = 0.0;
  for (int n = 0; n <= s.window_steps(); ++n) s.push(n, &value, &d);
  return s;
}

}  // namespace

TEST(Rhs, DecoupledLinearMode) {
  const ProblemSpec p = single_mode();
  const SpectralField du = rhs(0.0, SpectralField{{2.0}, 0.0}, constant_segment(2.0, 1.0), p);
  EXPECT_DOUBLE_EQ(du.coefficients[0], -3.0);
}

TEST(Rhs, DiscreteDelayTerm) {
  ProblemSpec p = single_mode();
  p.delay = DelayKernel::discrete(1.0, 1.0, 0.5, 0.25);
  const SpectralField du = rhs(0.0, SpectralField{{1.0}, 0.0}, constant_segment(1.0, 1.0), p);
  EXPECT_DOUBLE_EQ(du.coefficients[0], -1.25);
}

TEST(Rhs, RestStateIsFixed) {
  const ProblemSpec p = default_scenario("cubic-delayed").spec;
  ProblemSpec q = p;
  q.forcing = Forcing{};
  HistorySegment s(16, 0.01, 100, -1.0);
  std::vector<double> z(16, 0.0);
  for (int n = 0; n <= 100; ++n) s.push(n, z.data(), z.data());
  const SpectralField du = rhs(0.0, SpectralField{z, 0.0}, s, q);
  for (double c : du.coefficients) EXPECT_EQ(c, 0.0);
}

TEST(Rhs, DegenerateMassDetected) {
  ProblemSpec p = single_mode();
  p.epsilon = TimeProfile::constant(-2.0, 2.0);
  EXPECT_THROW(rhs(0.0, SpectralField{{1.0}, 0.0}, constant_segment(1.0, 1.0), p),
               DegenerateMass);
}

TEST(Integrate, MatchesClosedForm) {
  const Scenario s = default_scenario("linear-single-mode");
  const TrajectoryRecord rec = integrate(s.spec, s.solver, 0.0, 1.0);
  for (const TrajectoryRow& r : rec.rows)
    EXPECT_NEAR(r.state[0], std::exp(-1.5 * r.t), 1e-12 * (1 + r.t));
  EXPECT_EQ(rec.rows.size(), 1001u);
  EXPECT_EQ(rec.final_segment.latest_time(), rec.final_row().t);
}

TEST(Integrate, FourthOrderOnNonlinearDelayedProblem) {
  Scenario s = default_scenario("cubic-delayed");
  auto endpoint = [&](double dt) {
    SolverConfig c = s.solver;
    c.dt = dt;
    c.record_every = static_cast<int>(std::lround(1.0 / dt));
    return integrate(s.spec, c, 0.0, 1.0).final_row().state;
  };
  const auto a = endpoint(1.0 / 32), b = endpoint(1.0 / 64), c = endpoint(1.0 / 128);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    e1 += (a[j] - b[j]) * (a[j] - b[j]);
    e2 += (b[j] - c[j]) * (b[j] - c[j]);
  }
  const double ratio = std::sqrt(e1 / e2);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Integrate, ZeroDataStaysZero) {
  Scenario s = default_scenario("cubic-delayed");
  s.spec.forcing = Forcing{};
  s.spec.initial_history = InitialHistory{};
  const TrajectoryRecord rec = integrate(s.spec, s.solver, 0.0, 1.0);
  for (const TrajectoryRow& r : rec.rows)
    for (double c : r.state) EXPECT_EQ(c, 0.0);
}

TEST(Integrate, BitIdenticalReruns) {
  const Scenario s = default_scenario("cubic-delayed");
  const TrajectoryRecord a = integrate(s.spec, s.solver, 0.0, 0.5);
  const TrajectoryRecord b = integrate(s.spec, s.solver, 0.0, 0.5);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].state, b.rows[i].state);
    EXPECT_EQ(a.rows[i].energy_residual, b.rows[i].energy_residual);
  }
}

TEST(Integrate, BackendsAgreeBitwise) {
  Scenario s = default_scenario("cubic-delayed");
  SolverConfig ser = s.solver, par = s.solver;
  ser.backend = Backend::serial;
  par.backend = Backend::parallel;
  EXPECT_EQ(integrate(s.spec, ser, 0.0, 0.3).final_row().state,
            integrate(s.spec, par, 0.0, 0.3).final_row().state);
}

TEST(Integrate, RecordEverySubsamples) {
  Scenario s = default_scenario("cubic-delayed");
  s.solver.record_every = 100;
  const TrajectoryRecord rec = integrate(s.spec, s.solver, 0.0, 1.0);
  ASSERT_EQ(rec.rows.size(), 11u);
  EXPECT_NEAR(rec.rows[3].t, 0.3, 1e-12);
}

TEST(Integrate, BlowUpGuard) {
  Scenario s = default_scenario("cubic-delayed");
  s.solver.overflow_guard = 1e-3;
  EXPECT_THROW(integrate(s.spec, s.solver, 0.0, 0.5), NonFinite);
}

TEST(Config, StepMustDivideWindow) {
  Scenario s = default_scenario("cubic-delayed");
  s.solver.dt = 0.3;
  EXPECT_THROW(integrate(s.spec, s.solver, 0.0, 0.9), ConfigError);
  s.solver.dt = 0.125;  // divides k but leaves fewer than 16 steps per window
  EXPECT_THROW(integrate(s.spec, s.solver, 0.0, 1.0), ConfigError);
  s.solver.dt = 1e-3;
  s.solver.grid_size = 20;
  EXPECT_THROW(integrate(s.spec, s.solver, 0.0, 0.1), GridTooCoarse);
}

TEST(Dependence, IdenticalHistoriesStayTogether) {
  const Scenario s = default_scenario("cubic-delayed");
  const DependenceReport r =
      continuous_dependence(s.spec, s.solver, 0.0, 1.0, s.spec.initial_history,
                            s.spec.initial_history);
  for (double d : r.d) EXPECT_EQ(d, 0.0);
}

TEST(Dependence, LinearScalingFollowsClosedForm) {
  const Scenario s = default_scenario("linear-single-mode");
  const InitialHistory phi1 = s.spec.initial_history, phi2 = phi1.scaled(2.0);
  const DependenceReport r = continuous_dependence(s.spec, s.solver, 0.0, 1.0, phi1, phi2);
  // difference is e^{-1.5 t}; its window max sits at the oldest node
  // max(t - 1, 0), and C_Ht^2 = 2 max^2 with eps = lambda1 = 1.
  EXPECT_NEAR(r.d_tau, 2.0, 1e-12);
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    const double peak = std::exp(-1.5 * std::max(r.t[i] - 1.0, 0.0));
    EXPECT_NEAR(r.d[i] / r.d_tau, peak * peak, 1e-10);
  }
  EXPECT_EQ(r.c_hat, 0.0);
}

TEST(Dependence, NearbyCubicHistoriesGiveFiniteRate) {
  const Scenario s = default_scenario("cubic-delayed");
  InitialHistory phi2 = s.spec.initial_history;
  phi2.modes[0].constant += 1e-3;
  const DependenceReport r =
      continuous_dependence(s.spec, s.solver, 0.0, 2.0, s.spec.initial_history, phi2);
  EXPECT_TRUE(std::isfinite(r.c_hat));
  for (std::size_t i = 0; i < r.t.size(); ++i)
    EXPECT_LE(r.d[i], std::exp(r.c_hat * (r.t[i] + 1.0)) * r.d_tau * (1 + 1e-12));
}
