#include "pblab/scenario.hpp"

#include <cmath>

#include "pblab/errors.hpp"

namespace pblab {

namespace {

constexpr double kPi = 3.141592653589793;

// f(u) = u - u^3, diffusion between 2.5 and 4, gain 0.5 at lag 1.
Scenario cubic_base(const std::string& name) {
  Scenario s;
  s.name = name;
  ProblemSpec& p = s.spec;
  p.domain = DomainSpec{kPi, 16};
  p.epsilon = TimeProfile::constant(1.0, 1.0);
  p.diffusion = DiffusionLaw::rational(2.5, 4.0, 1.0);
  p.nonlocal.weights = {1.0, 0.0, 0.5};
  p.nonlinearity.coefficients = {0.0, 1.0, 0.0, -1.0};
  p.nonlinearity.p = 4.0;
  p.nonlinearity.c0 = 1.0;
  p.nonlinearity.c1 = 1.0;
  p.nonlinearity.c2 = 0.5;
  p.nonlinearity.eta_tilde = 1.0;
  p.delay = DelayKernel::discrete(1.0, 1.0, 0.5, 0.25);
  p.forcing.modes = {ForcingMode{1.0, 0.5, 1.0, 0.0}, ForcingMode{0.0, 0.3, 2.0, kPi / 2}};
  HistoryMode m1;
  m1.constant = 0.5;
  m1.slope = 0.2;
  HistoryMode m2;
  m2.amplitude = 0.3;
  m2.frequency = 2.0;
  HistoryMode m3;
  m3.exp_coefficient = 0.1;
  m3.exp_rate = 1.0;
  p.initial_history.modes = {m1, m2, m3};
  s.solver.dt = 1e-3;
  s.solver.grid_size = 49;
  s.tau = 0.0;
  s.t_end = 2.0;
  return s;
}

Scenario linear_single_mode() {
  Scenario s;
  s.name = "linear-single-mode";
  ProblemSpec& p = s.spec;
  p.domain = DomainSpec{kPi, 1};
  p.epsilon = TimeProfile::constant(1.0, 1.0);
  p.diffusion = DiffusionLaw::constant(3.0);
  p.nonlocal.weights = {1.0};
  p.nonlinearity.p = 2.0;
  p.nonlinearity.c0 = 1.0;
  p.delay = DelayKernel::discrete(1.0, 1.0, 0.0, 0.0);
  HistoryMode m;
  m.constant = 1.0;
  p.initial_history.modes = {m};
  s.solver.dt = 1e-3;
  s.tau = 0.0;
  s.t_end = 1.0;
  return s;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"linear-single-mode", "cubic-delayed", "increasing-eps", "decreasing-eps",
          "h-minus-one-tail"};
}

Scenario default_scenario(const std::string& name) {
  if (name == "linear-single-mode") return linear_single_mode();
  if (name == "cubic-delayed") return cubic_base(name);
  if (name == "decreasing-eps") {
    Scenario s = cubic_base(name);
    s.spec.epsilon = TimeProfile::decreasing_tanh(0.5, 1.57);
    return s;
  }
  if (name == "increasing-eps") {
    Scenario s = cubic_base(name);
    s.spec.epsilon = TimeProfile::increasing_tanh(0.5, 1.07);
    return s;
  }
  if (name == "h-minus-one-tail") {
    Scenario s = cubic_base(name);
    s.spec.forcing.tail_amplitude = 0.2;
    s.spec.forcing.tail_exponent = 0.4;
    return s;
  }
  throw UnknownScenario(name);
}

}  // namespace pblab
