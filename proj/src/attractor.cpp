#include "pblab/attractor.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>

#include "driver.hpp"
#include "galerkin.hpp"
#include "pblab/errors.hpp"
#include "pblab/kernels.hpp"
#include "pblab/quadrature.hpp"
#include "record.hpp"

namespace pblab {

// ------------------------------------------------------------------ sampling

double history_norm_sq(const ProblemSpec& spec, const SolverConfig& cfg, double tau,
                       const InitialHistory& phi) {
  const int K = cfg.window_steps(spec.delay.window());
  const EigenData eig = eigenvalues(spec.domain);
  const int n = eig.size();
  std::vector<double> t(K + 1), l2(K + 1), g(K + 1), p(K + 1), y(n);
  for (int i = 0; i <= K; ++i) {
    const double theta = (i - K) * cfg.dt;
    phi.value(theta, y);
    const NormBundle nb = norms(y.data(), eig, 0.0);
    t[i] = tau + theta;
    l2[i] = nb.l2_sq;
    g[i] = nb.grad_sq;
    p[i] = nb.lap_sq;
  }
  return composite_norms(t.data(), l2.data(), g.data(), p.data(), K + 1, spec.epsilon,
                         cfg.eps_weight)
      .c_ht_sq;
}

InitialHistory sample_history(const ProblemSpec& spec, const SolverConfig& cfg, double tau,
                              double target_c_ht_sq, std::uint64_t seed, int tau_index,
                              int sample_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(tau_index),
                    static_cast<std::uint32_t>(sample_index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  InitialHistory phi;
  phi.modes.resize(spec.domain.mode_count);
  for (auto& m : phi.modes) {
    m.constant = unit(rng);
    m.slope = unit(rng);
  }
  if (!(target_c_ht_sq > 0.0)) return phi.scaled(0.0);
  const double current = history_norm_sq(spec, cfg, tau, phi);
  if (!(current > 0.0)) return phi;
  return phi.scaled(std::sqrt(target_c_ht_sq / current));
}

// ------------------------------------------------------------------ ensembles

std::vector<HistorySegment> EnsembleRun::endpoints(int tau_index) const {
  std::vector<HistorySegment> out;
  for (const auto& m : members)
    if (m.tau_index == tau_index) out.push_back(m.endpoint);
  return out;
}

namespace {

ScalarFn forcing_norm_fn(const ProblemSpec& spec, const EigenData& eig) {
  if (spec.forcing.is_zero()) return {};
  return [&spec, eig](double s) { return forcing_hminus1_sq(spec.forcing, eig, s); };
}

int thread_count() {
  const int cap = kernels::thread_cap();
  const int avail = omp_get_max_threads();
  return cap > 0 ? std::min(cap, avail) : avail;
}

}  // namespace

EnsembleRun pullback_ensemble(const ProblemSpec& spec, const SolverConfig& cfg, double t,
                              const std::vector<double>& taus, int samples_per_tau,
                              std::uint64_t seed, const EnsembleOptions& opts) {
  if (taus.empty() || samples_per_tau < 1)
    throw ConfigError("ensemble needs at least one tau and one sample");
  const double k = spec.delay.window();
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] < t - k)) throw ConfigError("every tau must precede t - k");
    if (i > 0 && !(taus[i] < taus[i - 1])) throw ConfigError("taus must be strictly decreasing");
  }
  const BoundConstants consts = derive_constants(spec, opts.eta);
  const EigenData eig = eigenvalues(spec.domain);
  const ScalarFn h = forcing_norm_fn(spec, eig);

  EnsembleRun run;
  run.t = t;
  run.taus = taus;
  for (double tau : taus) run.rho_sq_tau.push_back(absorbing_radius(consts, tau, h));
  run.rho_sq_t = absorbing_radius(consts, t, h);

  const int total = static_cast<int>(taus.size()) * samples_per_tau;
  run.members.resize(total);
  std::vector<std::exception_ptr> errors(total);
  SolverConfig c = cfg;
  auto work = [&](int idx) {
    try {
      const int ti = idx / samples_per_tau;
      const int si = idx % samples_per_tau;
      const double tau = taus[ti];
      std::seed_seq radial_seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                               static_cast<std::uint32_t>(seed >> 32),
                               static_cast<std::uint32_t>(ti), static_cast<std::uint32_t>(si),
                               0x5eedu};
      std::mt19937_64 radial(radial_seq);
      const double frac = si % 2 == 0 ? 1.0 : std::uniform_real_distribution<double>(0.0, 1.0)(radial);
      const double target = run.rho_sq_tau[ti] * frac;
      ProblemSpec s = spec;
      s.initial_history = sample_history(spec, cfg, tau, target, seed, ti, si);
      SolverConfig local = c;
      local.record_every = static_cast<int>(std::max<long>(1, local.step_count(tau, t)));
      local.backend = Backend::serial;
      const TrajectoryRecord rec = integrate(s, local, tau, t);
      EnsembleMember& m = run.members[idx];
      m.tau = tau;
      m.tau_index = ti;
      m.sample_id = si;
      m.initial_c_ht_sq = rec.initial_window.c_ht_sq;
      m.endpoint_c_ht_sq = rec.final_row().window.c_ht_sq;
      m.within_rho = m.endpoint_c_ht_sq <= run.rho_sq_t;
      m.endpoint = rec.final_segment;
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };
  if (opts.parallel && total > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
    for (int idx = 0; idx < total; ++idx) work(idx);
  } else {
    for (int idx = 0; idx < total; ++idx) work(idx);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return run;
}

double semidistance(const std::vector<HistorySegment>& a, const std::vector<HistorySegment>& b,
                    SegmentNorm kind, const EigenData& eigen, const TimeProfile& eps,
                    EpsWeight weight) {
  if (a.empty() || b.empty()) throw EmptySet("semidistance of an empty set");
  double sup = 0.0;
  for (const auto& x : a) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& y : b) {
      const CompositeNorms c = difference_composite(x, y, eigen, eps, weight);
      const double d = kind == SegmentNorm::c_l2 ? c.c_l2_sq
                       : kind == SegmentNorm::c_ht ? c.c_ht_sq
                                                   : c.c_ht1_sq;
      inf = std::min(inf, d);
    }
    sup = std::max(sup, inf);
  }
  return std::sqrt(sup);
}

std::vector<HistorySegment> attractor_approximation(const ProblemSpec& spec,
                                                    const SolverConfig& cfg, double t,
                                                    double tau_far, int samples,
                                                    std::uint64_t seed,
                                                    const EnsembleOptions& opts) {
  return pullback_ensemble(spec, cfg, t, {tau_far}, samples, seed, opts).endpoints(0);
}

AbsorptionReport absorption_entry(const ProblemSpec& spec, const SolverConfig& cfg, double tau,
                                  const InitialHistory& phi, std::optional<double> eta) {
  ProblemSpec s = spec;
  s.initial_history = phi;
  const BoundConstants consts = derive_constants(s, eta);
  AbsorptionReport rep;
  rep.tau = tau;
  rep.phi_c_ht_sq = history_norm_sq(s, cfg, tau, phi);
  rep.margin = consts.margin;
  if (!(consts.margin > 0.0)) throw ConfigError("absorption needs a positive margin");
  rep.entry_bound =
      std::max(0.0, std::log(consts.coef_a * rep.phi_c_ht_sq / consts.margin) / consts.eta1);
  const long steps = std::max(1L, static_cast<long>(std::ceil(rep.entry_bound / cfg.dt - 1e-9)));
  const double t_end = tau + steps * cfg.dt;
  const TrajectoryRecord rec = integrate(s, cfg, tau, t_end);
  rep.entry_time = std::numeric_limits<double>::quiet_NaN();
  for (const BoundRow& r : bound_report(rec, consts, s)) {
    if (r.lhs <= r.rho_sq) {
      rep.entered = true;
      rep.entry_time = r.t - tau;
      break;
    }
  }
  rep.within_bound = rep.entered && rep.entry_time <= rep.entry_bound + 1e-9 * cfg.dt;
  return rep;
}

// ------------------------------------------------------------------ splitting

namespace {

double remainder_norm(const Forcing& r, const EigenData& eig, double t) {
  return std::sqrt(std::max(forcing_l2_sq(r, eig.size(), t), forcing_hminus1_sq(r, eig, t)));
}

}  // namespace

ForcingSplit split_forcing(const Forcing& h, double theta, const EigenData& eigen,
                           const std::vector<double>& probe_times) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw CannotSplit("split tolerance must be positive and finite");
  const int n = eigen.size();
  for (int kept = 0; kept <= n; ++kept) {
    const Forcing rem = h.restricted(kept + 1, n);
    double worst = 0.0;
    for (double t : probe_times) worst = std::max(worst, remainder_norm(rem, eigen, t));
    if (worst < theta) {
      ForcingSplit s;
      s.kept = h.restricted(1, kept);
      s.remainder = rem;
      s.kept_modes = kept;
      s.worst_remainder = worst;
      return s;
    }
  }
  throw CannotSplit("no truncation leaves a remainder below the tolerance");
}

double default_theta(const Forcing& h, const EigenData& eigen,
                     const std::vector<double>& probe_times) {
  double sup = 0.0;
  for (double t : probe_times) sup = std::max(sup, forcing_hminus1_sq(h, eigen, t));
  return sup > 0.0 ? 1e-2 * std::sqrt(sup) : 1e-2;
}

// ----------------------------------------------------------------- regularity

namespace {

// State [u, v, v1]: v carries phi and h - h^theta, v1 carries f(u), the delay
// and h^theta, with every u-dependent coefficient taken from u itself.
class DecomposedSystem {
 public:
  DecomposedSystem(const ProblemSpec& spec, const InitialHistory& phi, const ForcingSplit& split,
                   int grid, Backend backend)
      : spec_(spec),
        phi_(phi),
        split_(split),
        eig_(eigenvalues(spec.domain)),
        n_(spec.domain.mode_count),
        reaction_(spec, grid, backend),
        f_(n_),
        h_(n_),
        hk_(n_),
        hr_(n_),
        tmp_(n_) {}

  int dim() const { return 3 * n_; }
  int delay_dim() const { return n_; }
  int channels() const { return 9; }

  void initial(double theta, double* y) const {
    std::vector<double>& tmp = tmp_;
    phi_.value(theta, tmp);
    std::copy(tmp.begin(), tmp.end(), y);
    std::copy(tmp.begin(), tmp.end(), y + n_);
    std::fill(y + 2 * n_, y + 3 * n_, 0.0);
  }
  void initial_derivative(double theta, double* y) const {
    std::vector<double>& tmp = tmp_;
    phi_.derivative(theta, tmp);
    std::copy(tmp.begin(), tmp.end(), y);
    std::copy(tmp.begin(), tmp.end(), y + n_);
    std::fill(y + 2 * n_, y + 3 * n_, 0.0);
  }

  void rhs(double t, const double* y, const double* g, double* dy, detail::NodeAux* aux) {
    const double* u = y;
    const double* v = y + n_;
    const double* v1 = y + 2 * n_;
    const double eps = spec_.epsilon.value(t);
    const double l = nonlocal_value(u, n_, spec_.nonlocal);
    const double a = spec_.diffusion.value(l);
    reaction_.apply(u, f_.data());
    spec_.forcing.coefficients(t, h_);
    split_.kept.coefficients(t, hk_);
    split_.remainder.coefficients(t, hr_);
    double fu = 0.0, grad = 0.0, l2 = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double lam = eig_.lambda[j];
      const double mass = 1.0 + eps * lam;
      if (!(mass > 0.0)) throw DegenerateMass("1 + eps(t) lambda_j <= 0");
      const double F = f_[j] + g[j] + h_[j];
      dy[j] = (F - a * lam * u[j]) / mass;
      dy[n_ + j] = (hr_[j] - a * lam * v[j]) / mass;
      dy[2 * n_ + j] = (f_[j] + g[j] + hk_[j] - a * lam * v1[j]) / mass;
      if (aux != nullptr) {
        fu += F * u[j];
        grad += lam * u[j] * u[j];
        l2 += u[j] * u[j];
      }
    }
    if (aux != nullptr) {
      aux->a = a;
      aux->l = l;
      aux->energy = l2 + eps * grad;
      aux->integrand = 2.0 * fu - (2.0 * a - spec_.epsilon.derivative(t)) * grad;
    }
  }

  void scalars(const double* y, double* out) const {
    for (int part = 0; part < 3; ++part) {
      const NormBundle nb = norms(y + part * n_, eig_, 0.0);
      out[3 * part] = nb.l2_sq;
      out[3 * part + 1] = nb.grad_sq;
      out[3 * part + 2] = nb.lap_sq;
    }
  }

  const EigenData& eigen() const { return eig_; }

 private:
  const ProblemSpec& spec_;
  const InitialHistory& phi_;
  const ForcingSplit& split_;
  EigenData eig_;
  int n_;
  detail::ReactionProjector reaction_;
  std::vector<double> f_, h_, hk_, hr_;
  mutable std::vector<double> tmp_;
};

struct RegularitySetup {
  double theta = 0.0;
  ForcingSplit split;
  double sup_abs_eps = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  std::vector<double> times;     // tau .. t by dt
  std::vector<double> rho_sq;    // at times
  std::vector<double> i2_bound;  // at times
};

RegularitySetup regularity_setup(const ProblemSpec& spec, const SolverConfig& cfg, double tau,
                                 double t, const RegularityOptions& opts) {
  RegularitySetup s;
  const int K = cfg.window_steps(spec.delay.window());
  const long steps = cfg.step_count(tau, t);
  const EigenData eig = eigenvalues(spec.domain);
  s.times.resize(steps + 1);
  for (long i = 0; i <= steps; ++i) s.times[i] = tau + i * cfg.dt;
  for (long i = -K; i <= steps; ++i)
    s.sup_abs_eps = std::max(s.sup_abs_eps, std::abs(spec.epsilon.value(tau + i * cfg.dt)));
  s.theta = opts.theta ? *opts.theta : default_theta(spec.forcing, eig, s.times);
  s.split = split_forcing(spec.forcing, s.theta, eig, s.times);
  const double L = spec.epsilon.bound();
  const double denom = 1.0 / eig.lambda1() + s.sup_abs_eps;
  s.rho1 = (2.0 + L) / denom;
  s.rho2 = opts.rho2_fraction * (1.0 + L) / denom;

  const BoundConstants consts = derive_constants(spec, opts.eta);
  ScalarFn h = forcing_norm_fn(spec, eig);
  s.rho_sq = absorbing_radius_series(consts, tau, cfg.dt, s.times.size(), h);
  const double w = 2.0 * spec.nonlinearity.eta_tilde + spec.delay.lipschitz();
  std::vector<double> integrand(s.times.size());
  for (std::size_t i = 0; i < s.times.size(); ++i)
    integrand[i] = w * s.rho_sq[i] + 2.0 * forcing_hminus1_sq(s.split.kept, eig, s.times[i]);
  s.i2_bound = quadrature::discounted_cumulative_simpson(integrand, cfg.dt, s.rho2);
  return s;
}

}  // namespace

double regularity_radius(const ProblemSpec& spec, const SolverConfig& cfg, double tau, double t,
                         const RegularityOptions& opts) {
  return regularity_setup(spec, cfg, tau, t, opts).i2_bound.back();
}

RegularityReport solve_decomposed(const ProblemSpec& spec, const SolverConfig& cfg, double tau,
                                  double t, const InitialHistory& phi,
                                  const RegularityOptions& opts) {
  cfg.validate(spec.domain, spec.delay.window());
  RegularitySetup setup = regularity_setup(spec, cfg, tau, t, opts);
  const int K = cfg.window_steps(spec.delay.window());
  const long steps = cfg.step_count(tau, t);

  ProblemSpec s = spec;
  s.initial_history = phi;
  DecomposedSystem sys(s, s.initial_history, setup.split,
                       cfg.resolved_grid(spec.domain.mode_count), cfg.backend);
  detail::MethodOfSteps<DecomposedSystem> mos(sys, s.delay, tau, cfg.dt, K);
  const detail::RunData run = mos.run(steps, 1, cfg.overflow_guard);

  RegularityReport rep;
  rep.theta = setup.theta;
  rep.split = setup.split;
  rep.rho1 = setup.rho1;
  rep.rho2 = setup.rho2;
  rep.sup_abs_eps = setup.sup_abs_eps;
  rep.r1 = setup.rho_sq.back();
  rep.r2 = setup.i2_bound.back();

  const int n = spec.domain.mode_count;
  const EigenData& eig = sys.eigen();
  rep.u = detail::make_record(run, s, cfg.eps_weight, Representation::spectral, t,
                              [&eig, n](const double* y, double eps) {
                                return norms(y, eig, eps);
                              });
  for (auto& row : rep.u.rows) row.state.resize(n);

  const auto wu = detail::step_windows(run, s.epsilon, cfg.eps_weight, 0);
  const auto wv = detail::step_windows(run, s.epsilon, cfg.eps_weight, 3);
  const auto wv1 = detail::step_windows(run, s.epsilon, cfg.eps_weight, 6);
  rep.phi_c_ht1_sq = wv.front().c_ht1_sq;

  double max_u = 0.0, max_err = 0.0;
  std::vector<double> err(run.states.size());
  for (std::size_t r = 0; r < run.states.size(); ++r) {
    const auto& y = run.states[r];
    double e = 0.0, uu = 0.0;
    for (int j = 0; j < n; ++j) {
      const double d = y[n + j] + y[2 * n + j] - y[j];
      e += d * d;
      uu += y[j] * y[j];
    }
    err[r] = std::sqrt(e);
    max_u = std::max(max_u, std::sqrt(uu));
    max_err = std::max(max_err, err[r]);
  }
  const double scale = max_u > 0.0 ? max_u : 1.0;
  rep.max_superposition_err = max_err / scale;

  const double k = spec.delay.window();
  const double floor = setup.theta * setup.theta / setup.rho1;
  rep.rows.reserve(run.recorded.size());
  for (std::size_t r = 0; r < run.recorded.size(); ++r) {
    const long i = run.recorded[r];
    RegularityRow row;
    row.t = setup.times[i];
    row.i1 = wv[i].c_ht1_sq;
    row.i1_bound =
        std::exp(-setup.rho1 * std::max(0.0, row.t - k - tau)) * rep.phi_c_ht1_sq + floor;
    row.i1_bound_literal = std::exp(-setup.rho1 * (row.t + k - tau)) * rep.phi_c_ht1_sq + floor;
    row.i2 = wv1[i].c_ht1_sq;
    row.i2_bound = setup.i2_bound[i];
    row.superposition_err = err[r] / scale;
    row.u_c_ht1_sq = wu[i].c_ht1_sq;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace pblab
