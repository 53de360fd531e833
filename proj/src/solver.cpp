#include "pblab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "driver.hpp"
#include "galerkin.hpp"
#include "pblab/errors.hpp"
#include "record.hpp"

namespace pblab {

int SolverConfig::window_steps(double window) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  const double r = window / dt;
  const double k = std::round(r);
  if (std::abs(r - k) > 1e-9 * std::max(1.0, r))
    throw ConfigError("dt must divide the delay window exactly");
  if (k < min_window_steps)
    throw ConfigError("dt must not exceed k/" + std::to_string(min_window_steps));
  return static_cast<int>(k);
}

long SolverConfig::step_count(double tau, double t_end) const {
  if (!(t_end >= tau)) throw ConfigError("t_end must not precede tau");
  const double r = (t_end - tau) / dt;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, r))
    throw ConfigError("t_end - tau must be a multiple of dt");
  return static_cast<long>(n);
}

void SolverConfig::validate(const DomainSpec& domain, double window) const {
  domain.validate();
  window_steps(window);
  if (record_every < 1) throw ConfigError("record_every must be at least 1");
  if (grid_size != 0 && grid_size < minimum_grid(domain.mode_count))
    throw GridTooCoarse("grid size " + std::to_string(grid_size) + " below 2N+1 = " +
                        std::to_string(minimum_grid(domain.mode_count)));
}

double TrajectoryRecord::max_abs_energy_residual() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.energy_residual));
  return m;
}

SpectralField rhs(double t, const SpectralField& state, const HistorySegment& segment,
                  const ProblemSpec& spec, int grid_size) {
  const int n = spec.domain.mode_count;
  if (static_cast<int>(state.coefficients.size()) != n)
    throw ConfigError("state size does not match mode count");
  const int grid = grid_size > 0 ? grid_size : default_grid(n);
  detail::GalerkinSystem sys(spec, grid, Backend::serial);
  std::vector<double> g(n, 0.0), look(n);
  if (!spec.delay.is_zero()) {
    for (const DelayTap& tap : spec.delay.taps(t)) {
      const double* src = state.coefficients.data();
      if (tap.theta != 0.0) {
        const double s = t + tap.theta;
        if (s < segment.node_time(0) - 1e-12 * std::max(1.0, std::abs(s)) || s > t)
          throw OutOfWindow("segment does not cover t + theta");
        segment.evaluate_prefix(s, n, look.data());
        src = look.data();
      }
      for (int j = 0; j < n; ++j) g[j] += tap.weight * src[j];
    }
  }
  SpectralField out;
  out.timestamp = t;
  out.coefficients.resize(n);
  sys.rhs(t, state.coefficients.data(), g.data(), out.coefficients.data(), nullptr);
  return out;
}

TrajectoryRecord integrate(const ProblemSpec& spec, const SolverConfig& cfg, double tau,
                           double t_end) {
  cfg.validate(spec.domain, spec.delay.window());
  const int K = cfg.window_steps(spec.delay.window());
  const long steps = cfg.step_count(tau, t_end);
  detail::GalerkinSystem sys(spec, cfg.resolved_grid(spec.domain.mode_count), cfg.backend);
  detail::MethodOfSteps<detail::GalerkinSystem> mos(sys, spec.delay, tau, cfg.dt, K);
  const detail::RunData run = mos.run(steps, cfg.record_every, cfg.overflow_guard);
  const EigenData& eig = sys.eigen();
  return detail::make_record(run, spec, cfg.eps_weight, Representation::spectral, t_end,
                             [&eig](const double* u, double eps) { return norms(u, eig, eps); });
}

DependenceReport continuous_dependence(const ProblemSpec& spec, const SolverConfig& cfg,
                                       double tau, double t_end, const InitialHistory& phi1,
                                       const InitialHistory& phi2) {
  SolverConfig c = cfg;
  c.record_every = 1;
  ProblemSpec s1 = spec, s2 = spec;
  s1.initial_history = phi1;
  s2.initial_history = phi2;
  const TrajectoryRecord r1 = integrate(s1, c, tau, t_end);
  const TrajectoryRecord r2 = integrate(s2, c, tau, t_end);
  const EigenData eig = eigenvalues(spec.domain);
  const int n = eig.size();
  const int K = r1.window_steps;

  // per-node norms of the difference: initial segment nodes, then every step
  const std::size_t nodes = static_cast<std::size_t>(K) + r1.rows.size();
  std::vector<double> times(nodes), l2(nodes), gr(nodes), lp(nodes), diff(n);
  auto put = [&](std::size_t i, double t, const double* a, const double* b) {
    for (int j = 0; j < n; ++j) diff[j] = a[j] - b[j];
    const NormBundle nb = norms(diff.data(), eig, 0.0);
    times[i] = t;
    l2[i] = nb.l2_sq;
    gr[i] = nb.grad_sq;
    lp[i] = nb.lap_sq;
  };
  for (int i = 0; i < K; ++i)
    put(i, r1.initial_segment.node_time(i), r1.initial_segment.node_state(i),
        r2.initial_segment.node_state(i));
  for (std::size_t r = 0; r < r1.rows.size(); ++r)
    put(K + r, r1.rows[r].t, r1.rows[r].state.data(), r2.rows[r].state.data());
  const auto win = sliding_composite_norms(times.data(), l2.data(), gr.data(), lp.data(), nodes, K,
                                           spec.epsilon, cfg.eps_weight);

  DependenceReport rep;
  rep.d_tau = win.front().c_ht_sq;
  const double k = spec.delay.window();
  rep.c_hat = 0.0;
  bool all_zero = true;
  for (std::size_t r = 0; r < win.size(); ++r) {
    const double t = r1.rows[r].t;
    const double d = win[r].c_ht_sq;
    rep.t.push_back(t);
    rep.d.push_back(d);
    if (d != 0.0) all_zero = false;
    if (rep.d_tau > 0.0) {
      rep.c_hat = std::max(rep.c_hat, std::log(d / rep.d_tau) / (t + k - tau));
    }
  }
  if (rep.d_tau == 0.0 && !all_zero) rep.c_hat = std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace pblab
