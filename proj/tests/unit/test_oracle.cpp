#include <gtest/gtest.h>

#include <cmath>

#include "pblab/errors.hpp"
#include "pblab/oracle.hpp"
#include "pblab/scenario.hpp"

using namespace pblab;

TEST(ClosedForm, Examples) {
  EXPECT_EQ(oracle::single_mode_closed_form(3.0, 1.0, 1.0, 2.0, 0.5, 0.5), 2.0);
  EXPECT_EQ(oracle::single_mode_closed_form(0.0, 1.0, 1.0, 2.0, 0.0, 7.0), 2.0);
  EXPECT_NEAR(oracle::single_mode_closed_form(3.0, 1.0, 1.0, 2.0, 0.0, 1.0), 0.44626032029685964,
              1e-16);
  EXPECT_THROW(oracle::single_mode_closed_form(3.0, -1.0, 1.0, 2.0, 0.0, 1.0), DegenerateMass);
}

TEST(FiniteDifference, ZeroScenarioStaysZero) {
  Scenario s = default_scenario("cubic-delayed");
  s.spec.forcing = Forcing{};
  s.spec.initial_history = InitialHistory{};
  const TrajectoryRecord r = oracle::finite_difference_reference(s.spec, s.solver, 0.0, 0.5, 64);
  EXPECT_EQ(r.representation, Representation::grid);
  for (double v : r.final_row().state) EXPECT_EQ(v, 0.0);
}

TEST(FiniteDifference, SecondOrderOnSingleMode) {
  const Scenario s = default_scenario("linear-single-mode");
  const double exact = std::exp(-1.5);
  auto err = [&](int m) {
    const TrajectoryRecord r = oracle::finite_difference_reference(s.spec, s.solver, 0.0, 1.0, m);
    return oracle::grid_l2_distance({exact}, r.final_row().state, M_PI);
  };
  const double e1 = err(31), e2 = err(63);
  EXPECT_LT(e1, 1e-3);
  EXPECT_NEAR(e1 / e2, 4.0, 0.3);
}

TEST(FiniteDifference, AgreesWithSpectralOnCubic) {
  const Scenario s = default_scenario("cubic-delayed");
  const TrajectoryRecord sp = integrate(s.spec, s.solver, 0.0, 1.0);
  const TrajectoryRecord fd = oracle::finite_difference_reference(s.spec, s.solver, 0.0, 1.0, 256);
  EXPECT_LT(oracle::grid_l2_distance(sp.final_row().state, fd.final_row().state, M_PI), 1e-4);
  // grid norms approximate the spectral ones
  EXPECT_NEAR(fd.final_row().norms.l2_sq, sp.final_row().norms.l2_sq, 1e-3);
}

TEST(FiniteDifference, EnergyResidualSmall) {
  const Scenario s = default_scenario("cubic-delayed");
  const TrajectoryRecord fd = oracle::finite_difference_reference(s.spec, s.solver, 0.0, 1.0, 128);
  EXPECT_LT(fd.max_abs_energy_residual(), 1e-7);
}

TEST(FiniteDifference, RejectsTinyGrid) {
  const Scenario s = default_scenario("cubic-delayed");
  EXPECT_THROW(oracle::finite_difference_reference(s.spec, s.solver, 0.0, 0.1, 2), ConfigError);
}
