#ifndef PBLAB_SRC_RECORD_HPP
#define PBLAB_SRC_RECORD_HPP

#include <functional>
#include <vector>

#include "driver.hpp"
#include "pblab/solver.hpp"

namespace pblab::detail {

using RowNorms = std::function<NormBundle(const double* state, double eps)>;

// Window composites over channels (c0, c0 + 1, c0 + 2) of every step.
inline std::vector<CompositeNorms> step_windows(const RunData& run, const TimeProfile& eps,
                                                EpsWeight weight, int c0 = 0) {
  return sliding_composite_norms(run.times.data(), run.scalars[c0].data(),
                                 run.scalars[c0 + 1].data(), run.scalars[c0 + 2].data(),
                                 run.times.size(), run.window_steps, eps, weight);
}

inline TrajectoryRecord make_record(const RunData& run, const ProblemSpec& spec, EpsWeight weight,
                                    Representation rep, double t_end, const RowNorms& row_norms) {
  TrajectoryRecord rec;
  rec.representation = rep;
  rec.tau = run.tau;
  rec.t_end = t_end;
  rec.dt = run.dt;
  rec.window_steps = run.window_steps;
  rec.steps = run.steps;
  rec.initial_segment = run.initial_segment;
  rec.final_segment = run.final_segment;

  const std::vector<CompositeNorms> windows = step_windows(run, spec.epsilon, weight);
  rec.initial_window = windows.front();
  const std::vector<double> quad = quadrature::cumulative_simpson(run.integrand, run.dt);

  rec.rows.reserve(run.recorded.size());
  for (std::size_t r = 0; r < run.recorded.size(); ++r) {
    const long n = run.recorded[r];
    TrajectoryRow row;
    row.step = n;
    row.t = run.times[n + run.window_steps];
    row.state = run.states[r];
    row.norms = row_norms(row.state.data(), spec.epsilon.value(row.t));
    row.window = windows[n];
    row.a_value = run.a[n];
    row.l_value = run.l[n];
    row.energy_residual = run.energy[n] - run.energy[0] - quad[n];
    rec.rows.push_back(std::move(row));
  }
  return rec;
}

}  // namespace pblab::detail

#endif  // PBLAB_SRC_RECORD_HPP
