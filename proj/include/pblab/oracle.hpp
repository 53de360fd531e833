#ifndef PBLAB_ORACLE_HPP
#define PBLAB_ORACLE_HPP

// Independent references: the closed-form decoupled linear mode and a
// second-order finite-difference discretization of the same problem.

#include <vector>

#include "pblab/problem.hpp"
#include "pblab/solver.hpp"

namespace pblab::oracle {

// c exp(-a0 lambda1 (t - tau) / (1 + eps0 lambda1))
double single_mode_closed_form(double a0, double eps0, double lambda1, double c, double tau,
                               double t);

// (I + eps(t) A) u' = -a(l(u)) A u + f(u) + g(t, u_t) + h(t) on M interior
// points, A the three-point Dirichlet Laplacian, integrated with the same
// method-of-steps RK4. Forcing and history are synthesized from the first N
// sine modes. Rows carry grid values.
TrajectoryRecord finite_difference_reference(const ProblemSpec& spec, const SolverConfig& cfg,
                                             double tau, double t_end, int points);

// Discrete L2 distance between a spectral state and a grid state, with the
// spectral field evaluated at the grid points.
double grid_l2_distance(const std::vector<double>& coeffs, const std::vector<double>& grid_values,
                        double length);

}  // namespace pblab::oracle

#endif  // PBLAB_ORACLE_HPP
