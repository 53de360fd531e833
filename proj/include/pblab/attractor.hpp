#ifndef PBLAB_ATTRACTOR_HPP
#define PBLAB_ATTRACTOR_HPP

// Pullback ensembles, finite attractor sections, Hausdorff semidistance and
// the regularity decomposition u = v + v1.

#include <cstdint>
#include <optional>
#include <vector>

#include "pblab/energy.hpp"
#include "pblab/history.hpp"
#include "pblab/problem.hpp"
#include "pblab/solver.hpp"

namespace pblab {

// A random history of C_Ht^2 norm `target`, linear in theta per mode with
// coefficients drawn uniformly from [-1, 1] before rescaling. Deterministic
// in (seed, tau_index, sample_index).
InitialHistory sample_history(const ProblemSpec& spec, const SolverConfig& cfg, double tau,
                              double target_c_ht_sq, std::uint64_t seed, int tau_index,
                              int sample_index);

// C_Ht^2 of a history over the solver's node grid on [tau - k, tau].
double history_norm_sq(const ProblemSpec& spec, const SolverConfig& cfg, double tau,
                       const InitialHistory& phi);

struct EnsembleMember {
  double tau = 0.0;
  int tau_index = 0;
  int sample_id = 0;
  double initial_c_ht_sq = 0.0;
  double endpoint_c_ht_sq = 0.0;
  bool within_rho = false;
  HistorySegment endpoint;
};

struct EnsembleRun {
  double t = 0.0;
  std::vector<double> taus;
  std::vector<double> rho_sq_tau;
  double rho_sq_t = 0.0;
  std::vector<EnsembleMember> members;  // ordered by (tau index, sample id)

  std::vector<HistorySegment> endpoints(int tau_index) const;
};

struct EnsembleOptions {
  bool parallel = true;  // OpenMP over members, capped by PULLBACK_LAB_THREADS
  std::optional<double> eta;
};

// Even sample ids lie on the sphere C_Ht^2 = rho^2(tau), odd ones inside it.
EnsembleRun pullback_ensemble(const ProblemSpec& spec, const SolverConfig& cfg, double t,
                              const std::vector<double>& taus, int samples_per_tau,
                              std::uint64_t seed, const EnsembleOptions& opts = {});

// sup_{a in A} inf_{b in B} ||a - b|| in the chosen segment norm.
double semidistance(const std::vector<HistorySegment>& a, const std::vector<HistorySegment>& b,
                    SegmentNorm kind, const EigenData& eigen, const TimeProfile& eps,
                    EpsWeight weight = EpsWeight::argmax_node);

std::vector<HistorySegment> attractor_approximation(const ProblemSpec& spec,
                                                    const SolverConfig& cfg, double t,
                                                    double tau_far, int samples,
                                                    std::uint64_t seed,
                                                    const EnsembleOptions& opts = {});

struct AbsorptionReport {
  double tau = 0.0;
  double phi_c_ht_sq = 0.0;
  double margin = 0.0;      // delta
  double entry_bound = 0.0;  // T* = ln(coef_a ||phi||^2 / delta) / eta1
  double entry_time = 0.0;   // first recorded t - tau with C_Ht^2 <= rho^2(t); NaN if none
  bool entered = false;
  bool within_bound = false;  // entered no later than tau + T*
};

// Integrates from tau to tau + T* (rounded up to the step) and reports when
// the segment norm first drops into the absorbing ball rho^2(t), which
// already includes delta.
AbsorptionReport absorption_entry(const ProblemSpec& spec, const SolverConfig& cfg, double tau,
                                  const InitialHistory& phi, std::optional<double> eta = {});

struct ForcingSplit {
  Forcing kept;       // h^theta, the leading modes
  Forcing remainder;  // h - h^theta
  int kept_modes = 0;
  double worst_remainder = 0.0;  // max over probes of the remainder norm
};

// Keeps the fewest leading modes such that max(||r||, ||r||_{-1}) < theta at
// every probe time, over the first eigen.size() modes.
ForcingSplit split_forcing(const Forcing& h, double theta, const EigenData& eigen,
                           const std::vector<double>& probe_times);

// 1e-2 sup_t ||h(t)||_{-1} over the probes, or 1e-2 when h vanishes.
double default_theta(const Forcing& h, const EigenData& eigen,
                     const std::vector<double>& probe_times);

struct RegularityRow {
  double t = 0.0;
  double i1 = 0.0;
  double i1_bound = 0.0;          // e^{-rho1 max(0, t - k - tau)} ||phi||^2 + theta^2 / rho1
  double i1_bound_literal = 0.0;  // e^{-rho1 (t + k - tau)} ||phi||^2 + theta^2 / rho1
  double i2 = 0.0;
  double i2_bound = 0.0;
  double superposition_err = 0.0;  // ||v + v1 - u|| / max_t ||u||
  double u_c_ht1_sq = 0.0;
};

struct RegularityReport {
  double theta = 0.0;
  ForcingSplit split;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double sup_abs_eps = 0.0;
  double phi_c_ht1_sq = 0.0;
  double r1 = 0.0;  // rho^2 at the final time
  double r2 = 0.0;  // the v1 bound at the final time
  double max_superposition_err = 0.0;
  std::vector<RegularityRow> rows;
  TrajectoryRecord u;  // the full solution
};

struct RegularityOptions {
  std::optional<double> theta;
  std::optional<double> eta;
  double rho2_fraction = 0.9;  // rho2 = fraction (1 + L) / (1/lambda1 + sup|eps|)
};

RegularityReport solve_decomposed(const ProblemSpec& spec, const SolverConfig& cfg, double tau,
                                  double t, const InitialHistory& phi,
                                  const RegularityOptions& opts = {});

// R2 for data launched at tau, evaluated at t, without integrating anything.
double regularity_radius(const ProblemSpec& spec, const SolverConfig& cfg, double tau, double t,
                         const RegularityOptions& opts = {});

}  // namespace pblab

#endif  // PBLAB_ATTRACTOR_HPP
