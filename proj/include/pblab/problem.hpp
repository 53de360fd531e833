#ifndef PBLAB_PROBLEM_HPP
#define PBLAB_PROBLEM_HPP

// Coefficient model of the delayed nonlocal pseudo-parabolic problem
//
//   u_t - eps(t) (Delta u)_t - a(l(u)) Delta u = f(u) + g(t, u_t) + h(t)
//
// on the interval (0, length) with homogeneous Dirichlet conditions and an
// initial history phi on [-k, 0]. Every coefficient is a value type with pure
// evaluators, so a ProblemSpec can be shared between concurrent runs.

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace pblab {

struct DomainSpec {
  double length = 3.141592653589793;
  int mode_count = 16;

  double measure() const noexcept { return length; }
  void validate() const;
};

// eps(t): the weight of the pseudo-parabolic term.
class TimeProfile {
 public:
  enum class Kind { constant, decreasing_tanh, increasing_tanh, custom_sampled };

  TimeProfile() = default;

  static TimeProfile constant(double value, double bound);
  // 1 + amplitude (1 - tanh((t - center)/width)) / 2
  static TimeProfile decreasing_tanh(double amplitude, double bound,
                                     double center = 0.0, double width = 1.0);
  // 1 - amplitude (1 - tanh((t - center)/width)) / 2
  static TimeProfile increasing_tanh(double amplitude, double bound,
                                     double center = 0.0, double width = 1.0);
  // Piecewise cubic Hermite through (t, eps) samples, centered-difference
  // slopes, zero slope at both ends and constant extension outside.
  static TimeProfile custom_sampled(std::vector<std::pair<double, double>> samples,
                                    double bound);

  double value(double t) const;
  double derivative(double t) const;

  Kind kind() const noexcept { return kind_; }
  double bound() const noexcept { return bound_; }
  double amplitude() const noexcept { return amplitude_; }
  double center() const noexcept { return center_; }
  double width() const noexcept { return width_; }
  double eps_min() const noexcept { return eps_min_; }
  const std::vector<std::pair<double, double>>& samples() const noexcept { return samples_; }

  TimeProfile with_bound(double bound) const;
  TimeProfile with_eps_min(double eps_min) const;

 private:
  Kind kind_ = Kind::constant;
  double amplitude_ = 1.0;  // the constant value for Kind::constant
  double bound_ = 1.0;
  double center_ = 0.0;
  double width_ = 1.0;
  double eps_min_ = 1e-6;
  std::vector<std::pair<double, double>> samples_;
  std::vector<double> slopes_;
};

// a(s), the nonlocal diffusion coefficient, with declared bounds m <= a <= M.
class DiffusionLaw {
 public:
  enum class Kind { constant, tanh_ramp, rational };

  DiffusionLaw() = default;

  static DiffusionLaw constant(double value);
  // m + (M - m) (1 + tanh(s/width)) / 2
  static DiffusionLaw tanh_ramp(double lower, double upper, double width = 1.0);
  // m + (M - m) s^2 / (width^2 + s^2)
  static DiffusionLaw rational(double lower, double upper, double width = 1.0);

  double value(double s) const;
  // Lipschitz constant of a on [-radius, radius]. The shipped laws are
  // globally Lipschitz, so the radius only matters for user extensions.
  double lipschitz_on(double radius) const;

  Kind kind() const noexcept { return kind_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double width() const noexcept { return width_; }

  // Overrides the declared bounds without touching the evaluator. Used to
  // build deliberately inconsistent fixtures.
  DiffusionLaw with_declared_bounds(double lower, double upper) const;

 private:
  Kind kind_ = Kind::constant;
  double lower_ = 3.0;
  double upper_ = 3.0;
  double value_ = 3.0;
  double eval_lower_ = 3.0;
  double eval_upper_ = 3.0;
  double width_ = 1.0;
};

// l(u) = (j, u), with j given by its sine coefficients.
struct NonlocalFunctional {
  std::vector<double> weights;

  double norm() const;
};

// Polynomial reaction term f(u) = sum_k coefficients[k] u^k together with the
// constants it is claimed to satisfy.
struct Nonlinearity {
  std::vector<double> coefficients;  // empty means f = 0
  double p = 2.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double eta_tilde = 0.0;

  double value(double u) const;
  double derivative(double u) const;
  // F(u) = int_0^u f
  double antiderivative(double u) const;

  int degree() const;
  bool is_zero() const;
  // f(u) = c u, evaluated exactly in coefficient space
  bool is_linear() const;
  double linear_coefficient() const;
};

struct PotentialConstants {
  double local_sup = 0.0;  // max |f| on [-1, 1]
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

// Bounds -C0~ - C1~|u|^p <= F(u) <= C0~ - C2~|u|^p derived from C0..C2, p and
// the probed local supremum of |f| on [-1, 1].
PotentialConstants derive_potential_constants(const Nonlinearity& f);

// g(t, nu) as a finite combination of delayed lookups: sum_q w_q nu(theta_q).
struct DelayTap {
  double theta;
  double weight;
};

class DelayKernel {
 public:
  enum class Kind { discrete, distributed, variable };

  DelayKernel() = default;

  static DelayKernel discrete(double window, double lag, double gain, double lipschitz);
  // Kernel samples on a uniform theta grid spanning [-window, 0] (first sample
  // at -window), integrated with the trapezoid rule.
  static DelayKernel distributed(double window, std::vector<double> kernel, double lipschitz);
  // lag(t) = lag_mean + lag_amplitude sin(lag_frequency t)
  static DelayKernel variable(double window, double lag_mean, double lag_amplitude,
                              double lag_frequency, double gain, double lipschitz);

  std::vector<DelayTap> taps(double t) const;
  double lag_at(double t) const;

  Kind kind() const noexcept { return kind_; }
  double window() const noexcept { return window_; }
  double lipschitz() const noexcept { return lipschitz_; }
  double gain() const noexcept { return gain_; }
  double lag() const noexcept { return lag_; }
  double lag_amplitude() const noexcept { return lag_amplitude_; }
  double lag_frequency() const noexcept { return lag_frequency_; }
  const std::vector<double>& kernel() const noexcept { return kernel_; }
  bool is_zero() const;

  // sum_q |w_q| squared: the sharp Lipschitz constant of the tap combination
  // in the sup-in-theta L2 norm.
  double intrinsic_lipschitz() const;

  DelayKernel with_lipschitz(double lipschitz) const;

 private:
  Kind kind_ = Kind::discrete;
  double window_ = 1.0;
  double lag_ = 1.0;
  double gain_ = 0.0;
  double lipschitz_ = 0.0;
  double lag_amplitude_ = 0.0;
  double lag_frequency_ = 0.0;
  std::vector<double> kernel_;
};

// h(t) by sine coefficients. Listed modes carry
//   (base + amplitude sin(frequency t + phase)) e^{exp_rate t}
// and modes beyond the list carry tail_amplitude j^tail_exponent e^{exp_rate t}.
// Only modes in [first_mode, last_mode] are active, which is how forcing
// splits are represented.
struct ForcingMode {
  double base = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
};

struct Forcing {
  std::vector<ForcingMode> modes;
  double exp_rate = 0.0;
  double tail_amplitude = 0.0;
  double tail_exponent = 0.0;
  int first_mode = 1;
  int last_mode = std::numeric_limits<int>::max();

  double coefficient(int j, double t) const;  // j is 1-based
  void coefficients(double t, std::vector<double>& out) const;  // out.size() modes
  bool is_zero() const;

  Forcing restricted(int first, int last) const;
};

// phi(theta) by sine coefficients; mode j evolves as
//   constant + slope theta + amplitude sin(frequency theta) + exp_coefficient e^{exp_rate theta}
struct HistoryMode {
  double constant = 0.0;
  double slope = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;
  double exp_coefficient = 0.0;
  double exp_rate = 0.0;

  double value(double theta) const;
  double derivative(double theta) const;
};

struct InitialHistory {
  std::vector<HistoryMode> modes;

  void value(double theta, std::vector<double>& out) const;       // out.size() modes
  void derivative(double theta, std::vector<double>& out) const;  // out.size() modes
  InitialHistory scaled(double factor) const;
  bool is_zero() const;
};

struct ProblemSpec {
  DomainSpec domain;
  TimeProfile epsilon;
  DiffusionLaw diffusion;
  NonlocalFunctional nonlocal;
  Nonlinearity nonlinearity;
  DelayKernel delay;
  Forcing forcing;
  InitialHistory initial_history;
};

// Sampling plan for the hypothesis audit.
struct ProbeGrid {
  double t_min = -40.0;
  double t_max = 40.0;
  int t_count = 4001;
  double u_max = 100.0;
  int u_count = 4001;
  double s_max = 100.0;
  int s_count = 4001;
  int pair_count = 2000;
  double limit_horizon = 40.0;  // eps(t) -> 1 is checked on [t_max, t_max + this]
  double limit_tolerance = 1e-6;
  double relative_slack = 1e-12;
  std::uint64_t seed = 20240917;
};

struct HypothesisCheck {
  std::string name;
  bool passed = true;
  std::string witness;
  double worst = 0.0;  // worst observed value of the checked quantity
  double limit = 0.0;  // the value it is compared against
};

struct AuditReport {
  std::vector<HypothesisCheck> checks;
  PotentialConstants potential;

  bool passed() const;
  const HypothesisCheck* find(const std::string& name) const;
  std::vector<std::string> failures() const;
};

AuditReport audit(const ProblemSpec& spec, const ProbeGrid& probes = {});

// Runs audit and throws HypothesisViolation for the first failed check.
AuditReport require_admissible(const ProblemSpec& spec, const ProbeGrid& probes = {});

// sup over the probe window of |eps| + |eps'| and sup of eps'.
struct ProfileExtent {
  double sup_abs_plus_derivative = 0.0;
  double sup_derivative = 0.0;
  double sup_abs = 0.0;
  double inf_value = 0.0;
};

ProfileExtent profile_extent(const TimeProfile& eps, const ProbeGrid& probes = {});

}  // namespace pblab

#endif  // PBLAB_PROBLEM_HPP
