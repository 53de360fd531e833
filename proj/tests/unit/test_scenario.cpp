#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "pblab/errors.hpp"
#include "pblab/scenario.hpp"

using namespace pblab;

TEST(Scenario, EveryDefaultPassesAudit) {
  for (const std::string& name : scenario_names()) {
    const AuditReport r = audit(default_scenario(name).spec);
    EXPECT_TRUE(r.passed()) << name << ": " << (r.passed() ? "" : r.failures().front());
  }
}

TEST(Scenario, UnknownNameThrows) {
  EXPECT_THROW(default_scenario("no-such-scenario"), UnknownScenario);
  EXPECT_THROW(load_scenario("default:nope"), UnknownScenario);
}

TEST(Scenario, LinearSingleModeShape) {
  const Scenario s = default_scenario("linear-single-mode");
  EXPECT_EQ(s.spec.domain.mode_count, 1);
  EXPECT_TRUE(s.spec.nonlinearity.is_zero());
  EXPECT_TRUE(s.spec.delay.is_zero());
  EXPECT_TRUE(s.spec.forcing.is_zero());
  EXPECT_EQ(s.spec.diffusion.kind(), DiffusionLaw::Kind::constant);
}

TEST(Scenario, CubicDelayedShape) {
  const Scenario s = default_scenario("cubic-delayed");
  EXPECT_DOUBLE_EQ(s.spec.nonlinearity.value(2.0), 2.0 - 8.0);
  EXPECT_EQ(s.spec.delay.kind(), DelayKernel::Kind::discrete);
  EXPECT_DOUBLE_EQ(s.spec.delay.gain(), 0.5);
}

TEST(Scenario, DecreasingEpsProfile) {
  const Scenario s = default_scenario("decreasing-eps");
  EXPECT_EQ(s.spec.epsilon.kind(), TimeProfile::Kind::decreasing_tanh);
  EXPECT_DOUBLE_EQ(s.spec.epsilon.amplitude(), 0.5);
}

TEST(ScenarioJson, RoundTripsEveryDefault) {
  for (const std::string& name : scenario_names()) {
    const Scenario a = default_scenario(name);
    const std::string text = scenario_to_json(a);
    const Scenario b = scenario_from_json(text);
    EXPECT_EQ(scenario_to_json(b), text) << name;
    EXPECT_EQ(b.spec.domain.mode_count, a.spec.domain.mode_count);
    for (double t : {-1.0, 0.0, 2.5})
      EXPECT_EQ(b.spec.epsilon.value(t), a.spec.epsilon.value(t));
    for (double s : {-3.0, 0.1, 4.0})
      EXPECT_EQ(b.spec.diffusion.value(s), a.spec.diffusion.value(s));
  }
}

TEST(ScenarioJson, UnknownKeysRejected) {
  EXPECT_THROW(scenario_from_json(R"({"domain": {"length": 3, "mods": 4}})"), ConfigError);
  EXPECT_THROW(scenario_from_json(R"({"extra": 1})"), ConfigError);
  EXPECT_THROW(scenario_from_json(R"({"forcing": {"modes": [{"bse": 1}]}})"), ConfigError);
}

TEST(ScenarioJson, MalformedRejected) {
  EXPECT_THROW(scenario_from_json("{"), ConfigError);
  EXPECT_THROW(scenario_from_json(R"({"domain": {"modes": 2.5}})"), ConfigError);
  EXPECT_THROW(scenario_from_json(R"({"epsilon": {"kind": "wobbly"}})"), ConfigError);
}

TEST(ScenarioJson, LoadsFromFile) {
  const std::string path = ::testing::TempDir() + "scenario_roundtrip.json";
  {
    std::ofstream f(path);
    f << scenario_to_json(default_scenario("cubic-delayed"));
  }
  const Scenario s = load_scenario(path);
  EXPECT_EQ(s.name, "cubic-delayed");
  std::remove(path.c_str());
  EXPECT_THROW(load_scenario(path), ConfigError);
}
