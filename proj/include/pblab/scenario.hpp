#ifndef PBLAB_SCENARIO_HPP
#define PBLAB_SCENARIO_HPP

// Named built-in scenarios and the JSON scenario format.

#include <optional>
#include <string>
#include <vector>

#include "pblab/problem.hpp"
#include "pblab/solver.hpp"

namespace pblab {

struct Scenario {
  std::string name;
  ProblemSpec spec;
  SolverConfig solver;
  double tau = 0.0;
  double t_end = 2.0;
  std::optional<double> eta;
};

// linear-single-mode, cubic-delayed, increasing-eps, decreasing-eps,
// h-minus-one-tail
std::vector<std::string> scenario_names();
Scenario default_scenario(const std::string& name);

// Throws ConfigError on malformed documents or unknown keys.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& s);

// "default:<name>" resolves to a built-in, anything else is a file path.
Scenario load_scenario(const std::string& uri);

}  // namespace pblab

#endif  // PBLAB_SCENARIO_HPP
