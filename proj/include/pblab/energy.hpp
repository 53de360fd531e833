#ifndef PBLAB_ENERGY_HPP
#define PBLAB_ENERGY_HPP

// Explicit constants of the pullback energy bound, the absorbing radius, the
// tempered-family predicate and the contraction functional psi.

#include <functional>
#include <optional>
#include <vector>

#include "pblab/problem.hpp"
#include "pblab/solver.hpp"
#include "pblab/spectral.hpp"

namespace pblab {

struct BoundConstants {
  double eta = 0.0;
  double eta1 = 0.0;
  double eta_max = 0.0;      // (1 + L) lambda1 / (1 + lambda1 L)
  double delay_shift = 0.0;  // C_g e^{eta k} / (1 + lambda1 L) = eta - eta1
  double coef_a = 1.0;
  double coef_b = 1.0;
  double coef_c = 1.0;
  double constant_term = 0.0;  // coef_b (2 C0 |Omega| / eta) e^{eta k}
  double margin = 0.0;         // delta
  double lambda1 = 0.0;
  double bound_l = 0.0;  // L of the eps profile
  double window = 0.0;   // k
  double c_g = 0.0;
  double c0 = 0.0;
  double measure = 0.0;
  bool eta_fallback = false;  // default eta replaced by the eta1-maximizing one
};

struct ConstantInputs {
  double c_g = 0.0;
  double window = 1.0;
  double lambda1 = 1.0;
  double bound_l = 1.0;
  double c0 = 0.0;
  double measure = 1.0;
};

// Throws DelayTooStrong when no admissible eta yields eta1 > 0, ConfigError
// when an explicit eta lies outside (0, eta_max) or gives eta1 <= 0.
BoundConstants derive_constants(const ConstantInputs& in, std::optional<double> eta_choice = {},
                                double margin_fraction = 1e-3);
BoundConstants derive_constants(const ProblemSpec& spec, std::optional<double> eta_choice = {},
                                double margin_fraction = 1e-3);

// ||h(t)||_{-1}^2 over the Galerkin modes.
double forcing_hminus1_sq(const Forcing& h, const EigenData& eigen, double t);
double forcing_l2_sq(const Forcing& h, int modes, double t);

using ScalarFn = std::function<double(double)>;

struct PhiNorms {
  double c_l2_sq = 0.0;
  double eps_tau_grad_sq = 0.0;
};

// Right-hand side of the pullback energy bound at time t for data given at
// tau; the h-integral is done by composite Simpson.
double lemma41_rhs(const BoundConstants& c, double tau, double t, const PhiNorms& phi,
                   const ScalarFn& h_norm_sq);

// rho^2(t) with the improper h-integral truncated adaptively. Throws
// ForcingNotTempered when the tail does not settle.
double absorbing_radius(const BoundConstants& c, double t, const ScalarFn& h_norm_sq);

// int_{-inf}^t e^{-eta1 (t - s)} h_norm_sq(s) ds
double tempered_forcing_integral(double eta1, double t, const ScalarFn& h_norm_sq);

// rho^2 on t0, t0 + step, ..., by recurrence from the improper integral at t0.
std::vector<double> absorbing_radius_series(const BoundConstants& c, double t0, double step,
                                            std::size_t count, const ScalarFn& h_norm_sq);

// True iff e^{eta1 tau} r^2(tau) has dropped to 1e-6 max(1, first value) at
// the last probe. Probes must decrease.
bool tempered_test(const ScalarFn& radius_sq, double eta1, const std::vector<double>& probe_taus,
                   double tolerance = 1e-6);

struct BoundRow {
  double t = 0.0;
  double lhs = 0.0;  // composite C_Ht^2 of u_t
  double rhs = 0.0;
  double rho_sq = 0.0;
  double slack = 0.0;  // rhs - lhs
};

// Bound monitor along a record: rhs uses the record's initial segment as phi.
std::vector<BoundRow> bound_report(const TrajectoryRecord& rec, const BoundConstants& c,
                                   const ProblemSpec& spec);

// Smallest slack / (1 + rhs) over the rows.
double worst_relative_slack(const std::vector<BoundRow>& rows);

struct ContractionRow {
  double t = 0.0;
  double lhs = 0.0;      // composite C_Ht^2 of the difference segment
  double initial = 0.0;  // (C_L2^2 + L C_grad^2) of the initial difference
  double decay = 0.0;    // e^{-2 eta1 (t - k - tau)}
  double psi = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

// psi at every shared row; both records need record_every = 1 and identical
// timestamps (TimestampMismatch otherwise).
std::vector<ContractionRow> contraction_report(const TrajectoryRecord& a,
                                               const TrajectoryRecord& b,
                                               const BoundConstants& c, const ProblemSpec& spec,
                                               EpsWeight weight = EpsWeight::argmax_node);

// psi_{t,T} at the final row.
double contraction_functional(const TrajectoryRecord& a, const TrajectoryRecord& b,
                              const BoundConstants& c, const ProblemSpec& spec);

// Composite norms of the difference segment at each row (record_every = 1).
std::vector<CompositeNorms> difference_windows(const TrajectoryRecord& a,
                                               const TrajectoryRecord& b, const EigenData& eigen,
                                               const TimeProfile& eps,
                                               EpsWeight weight = EpsWeight::argmax_node);

}  // namespace pblab

#endif  // PBLAB_ENERGY_HPP
