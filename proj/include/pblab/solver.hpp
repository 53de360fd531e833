#ifndef PBLAB_SOLVER_HPP
#define PBLAB_SOLVER_HPP

// Faedo-Galerkin mode system
//
//   (1 + eps(t) lambda_j) u_j' = F_j - a(l(u)) lambda_j u_j,
//   F = P f(u) + g(t, u_t) + h(t),
//
// integrated by method-of-steps RK4 with Hermite lookups into the segment.

#include <vector>

#include "pblab/history.hpp"
#include "pblab/problem.hpp"
#include "pblab/spectral.hpp"

namespace pblab {

struct SolverConfig {
  enum class Integrator { rk4 };

  double dt = 1e-3;
  Integrator integrator = Integrator::rk4;
  int grid_size = 0;  // 0 selects 3N + 1
  int record_every = 1;
  double overflow_guard = 1e30;
  int min_window_steps = 16;  // dt <= k / min_window_steps
  Backend backend = Backend::automatic;
  EpsWeight eps_weight = EpsWeight::argmax_node;

  int resolved_grid(int modes) const { return grid_size > 0 ? grid_size : default_grid(modes); }
  // k / dt, checked to be an integer no smaller than min_window_steps
  int window_steps(double window) const;
  // (t_end - tau) / dt, checked to be an integer
  long step_count(double tau, double t_end) const;
  void validate(const DomainSpec& domain, double window) const;
};

enum class Representation { spectral, grid };

struct TrajectoryRow {
  long step = 0;
  double t = 0.0;
  std::vector<double> state;  // sine coefficients, or grid values
  NormBundle norms;
  CompositeNorms window;  // composite norms of the segment ending at t
  double a_value = 0.0;
  double l_value = 0.0;
  double energy_residual = 0.0;
};

struct TrajectoryRecord {
  Representation representation = Representation::spectral;
  double tau = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
  int window_steps = 0;
  long steps = 0;
  double grid_spacing = 0.0;  // grid representation only
  std::vector<TrajectoryRow> rows;
  HistorySegment initial_segment;
  HistorySegment final_segment;
  CompositeNorms initial_window;

  const TrajectoryRow& final_row() const { return rows.back(); }
  double max_abs_energy_residual() const;
};

// u' at time t for the given state; the segment supplies u(t + theta) for
// theta < 0 and must reach back to t - k.
SpectralField rhs(double t, const SpectralField& state, const HistorySegment& segment,
                  const ProblemSpec& spec, int grid_size = 0);

TrajectoryRecord integrate(const ProblemSpec& spec, const SolverConfig& cfg, double tau,
                           double t_end);

struct DependenceReport {
  std::vector<double> t;
  std::vector<double> d;  // ||u1_t - u2_t||^2 in the composite segment norm
  double d_tau = 0.0;
  double c_hat = 0.0;  // smallest C with d(t) <= e^{C (t + k - tau)} d(tau)
};

DependenceReport continuous_dependence(const ProblemSpec& spec, const SolverConfig& cfg,
                                       double tau, double t_end, const InitialHistory& phi1,
                                       const InitialHistory& phi2);

}  // namespace pblab

#endif  // PBLAB_SOLVER_HPP
