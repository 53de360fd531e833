#include "pblab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pblab/errors.hpp"
#include "pblab/quadrature.hpp"

namespace pblab {

namespace {

double shift_at(const ConstantInputs& in, double eta) {
  return in.c_g * std::exp(eta * in.window) / (1.0 + in.lambda1 * in.bound_l);
}

}  // namespace

BoundConstants derive_constants(const ConstantInputs& in, std::optional<double> eta_choice,
                                double margin_fraction) {
  if (!(in.window > 0.0) || !(in.lambda1 > 0.0) || !(in.bound_l >= 0.0) || !(in.c_g >= 0.0))
    throw ConfigError("bound constants need k > 0, lambda1 > 0, L >= 0, C_g >= 0");
  BoundConstants c;
  c.lambda1 = in.lambda1;
  c.bound_l = in.bound_l;
  c.window = in.window;
  c.c_g = in.c_g;
  c.c0 = in.c0;
  c.measure = in.measure;
  c.eta_max = (1.0 + in.bound_l) * in.lambda1 / (1.0 + in.lambda1 * in.bound_l);

  // eta1(eta) = eta - C e^{eta k} is concave with its peak at eta_star
  double eta_star = c.eta_max;
  double sup_eta1 = c.eta_max - shift_at(in, c.eta_max);
  if (in.c_g > 0.0) {
    const double C = in.c_g / (1.0 + in.lambda1 * in.bound_l);
    eta_star = std::log(1.0 / (C * in.window)) / in.window;
    if (eta_star <= 0.0) {
      sup_eta1 = -C;
    } else if (eta_star < c.eta_max) {
      sup_eta1 = eta_star - shift_at(in, eta_star);
    } else {
      eta_star = c.eta_max;
    }
  }
  if (!(sup_eta1 > 0.0)) throw DelayTooStrong(sup_eta1);

  double eta;
  if (eta_choice) {
    eta = *eta_choice;
    if (!(eta > 0.0) || !(eta < c.eta_max))
      throw ConfigError("eta must lie in (0, " + std::to_string(c.eta_max) + ")");
    if (!(eta - shift_at(in, eta) > 0.0))
      throw ConfigError("eta = " + std::to_string(eta) + " gives eta1 <= 0; best eta1 is " +
                        std::to_string(sup_eta1));
  } else {
    eta = 0.9 * c.eta_max;
    if (!(eta - shift_at(in, eta) > 0.0)) {
      eta = std::min(eta_star, 0.999 * c.eta_max);
      c.eta_fallback = true;
      if (!(eta - shift_at(in, eta) > 0.0)) throw DelayTooStrong(sup_eta1);
    }
  }

  c.eta = eta;
  c.delay_shift = shift_at(in, eta);
  c.eta1 = eta - c.delay_shift;
  if (in.c_g == 0.0) {
    c.coef_a = c.coef_b = c.coef_c = 1.0;
  } else {
    c.coef_b = 1.0 + c.delay_shift / c.eta1;
    c.coef_a = 1.0 + c.delay_shift / (c.eta - c.eta1);
    c.coef_c = c.coef_a;
  }
  c.constant_term = c.coef_b * (2.0 * in.c0 * in.measure / eta) * std::exp(eta * in.window);
  c.margin = margin_fraction * c.constant_term;
  return c;
}

BoundConstants derive_constants(const ProblemSpec& spec, std::optional<double> eta_choice,
                                double margin_fraction) {
  ConstantInputs in;
  in.c_g = spec.delay.lipschitz();
  in.window = spec.delay.window();
  in.lambda1 = eigenvalues(spec.domain).lambda1();
  in.bound_l = spec.epsilon.bound();
  in.c0 = spec.nonlinearity.c0;
  in.measure = spec.domain.measure();
  return derive_constants(in, eta_choice, margin_fraction);
}

double forcing_hminus1_sq(const Forcing& h, const EigenData& eigen, double t) {
  double s = 0.0;
  for (int j = 1; j <= eigen.size(); ++j) {
    const double c = h.coefficient(j, t);
    s += c * c / eigen.lambda[j - 1];
  }
  return s;
}

double forcing_l2_sq(const Forcing& h, int modes, double t) {
  double s = 0.0;
  for (int j = 1; j <= modes; ++j) {
    const double c = h.coefficient(j, t);
    s += c * c;
  }
  return s;
}

double lemma41_rhs(const BoundConstants& c, double tau, double t, const PhiNorms& phi,
                   const ScalarFn& h_norm_sq) {
  if (t < tau) throw ConfigError("lemma41_rhs needs t >= tau");
  double r = c.constant_term +
             c.coef_a * (phi.c_l2_sq + phi.eps_tau_grad_sq) * std::exp(-c.eta1 * (t - tau));
  if (t > tau && h_norm_sq) {
    const int intervals = std::max(2, static_cast<int>(std::ceil(64.0 * (t - tau))));
    const double integral = quadrature::simpson(
        [&](double s) { return std::exp(-c.eta1 * (t - s)) * h_norm_sq(s); }, tau, t, intervals);
    r += c.coef_c * std::exp(c.eta * c.window) * integral;
  }
  return r;
}

double tempered_forcing_integral(double eta1, double t, const ScalarFn& h_norm_sq) {
  if (!h_norm_sq) return 0.0;
  if (!(eta1 > 0.0)) throw ForcingNotTempered("eta1 must be positive");
  const double chunk = std::min(1.0, 1.0 / eta1);
  const long max_chunks = 200000;
  double total = 0.0;
  int quiet = 0;
  for (long j = 0; j < max_chunks; ++j) {
    const double hi = t - j * chunk;
    const double lo = hi - chunk;
    const double part = std::exp(-eta1 * (t - hi)) *
                        quadrature::simpson(
                            [&](double s) { return std::exp(-eta1 * (hi - s)) * h_norm_sq(s); },
                            lo, hi, 64);
    if (!std::isfinite(part)) throw ForcingNotTempered("non-finite forcing integral");
    total += part;
    if (!std::isfinite(total)) throw ForcingNotTempered("forcing integral overflows");
    const bool small = total > 0.0 ? std::abs(part) <= 1e-16 * total
                                   : std::exp(-eta1 * (t - lo)) < 1e-16;
    quiet = small ? quiet + 1 : 0;
    if (quiet >= 2) return total;
  }
  throw ForcingNotTempered("h-integral tail did not settle");
}

double absorbing_radius(const BoundConstants& c, double t, const ScalarFn& h_norm_sq) {
  return c.constant_term +
         c.coef_c * std::exp(c.eta * c.window) * tempered_forcing_integral(c.eta1, t, h_norm_sq) +
         c.margin;
}

namespace {

// P(t + d) = e^{-r d} P(t) + int_t^{t+d} e^{-r (t + d - s)} H(s) ds
double discounted_step(double r, double t, double d, const ScalarFn& h) {
  if (!h) return 0.0;
  return d / 6.0 *
         (std::exp(-r * d) * h(t) + 4.0 * std::exp(-0.5 * r * d) * h(t + 0.5 * d) + h(t + d));
}

}  // namespace

std::vector<double> absorbing_radius_series(const BoundConstants& c, double t0, double step,
                                            std::size_t count, const ScalarFn& h_norm_sq) {
  std::vector<double> out(count);
  double p = tempered_forcing_integral(c.eta1, t0, h_norm_sq);
  const double scale = c.coef_c * std::exp(c.eta * c.window);
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) {
      const double t = t0 + (i - 1) * step;
      p = std::exp(-c.eta1 * step) * p + discounted_step(c.eta1, t, step, h_norm_sq);
    }
    out[i] = c.constant_term + scale * p + c.margin;
  }
  return out;
}

bool tempered_test(const ScalarFn& radius_sq, double eta1, const std::vector<double>& probe_taus,
                   double tolerance) {
  if (probe_taus.empty()) return true;
  auto log_product = [&](double tau) {
    const double r = radius_sq(tau);
    if (std::isnan(r)) return std::numeric_limits<double>::infinity();
    if (r <= 0.0) return -std::numeric_limits<double>::infinity();
    return eta1 * tau + std::log(r);
  };
  const double first = log_product(probe_taus.front());
  const double last = log_product(probe_taus.back());
  if (std::isinf(last) && last > 0.0) return false;
  return last <= std::log(tolerance) + std::max(0.0, first);
}

std::vector<BoundRow> bound_report(const TrajectoryRecord& rec, const BoundConstants& c,
                                   const ProblemSpec& spec) {
  std::vector<BoundRow> out;
  if (rec.rows.empty()) return out;
  const EigenData eig = eigenvalues(spec.domain);
  ScalarFn h;
  if (!spec.forcing.is_zero())
    h = [&spec, &eig](double s) { return forcing_hminus1_sq(spec.forcing, eig, s); };
  const double tau = rec.tau;
  const double scale = c.coef_c * std::exp(c.eta * c.window);
  const double p_inf = tempered_forcing_integral(c.eta1, tau, h);
  const double phi = rec.initial_window.c_ht_sq;
  double p_tau = 0.0;  // int_tau^t
  double prev = tau;
  for (const TrajectoryRow& row : rec.rows) {
    const double t = row.t;
    if (t > prev) {
      p_tau = std::exp(-c.eta1 * (t - prev)) * p_tau + discounted_step(c.eta1, prev, t - prev, h);
      prev = t;
    }
    BoundRow b;
    b.t = t;
    b.lhs = row.window.c_ht_sq;
    const double decay = std::exp(-c.eta1 * (t - tau));
    b.rhs = c.constant_term + c.coef_a * phi * decay + scale * p_tau;
    b.rho_sq = c.constant_term + scale * (decay * p_inf + p_tau) + c.margin;
    b.slack = b.rhs - b.lhs;
    out.push_back(b);
  }
  return out;
}

double worst_relative_slack(const std::vector<BoundRow>& rows) {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) w = std::min(w, r.slack / (1.0 + std::abs(r.rhs)));
  return w;
}

namespace {

void check_shared(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  if (a.rows.size() != b.rows.size() || a.dt != b.dt || a.tau != b.tau ||
      a.window_steps != b.window_steps)
    throw TimestampMismatch("trajectories do not share timestamps");
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    if (a.rows[i].t != b.rows[i].t) throw TimestampMismatch("trajectories do not share timestamps");
  if (static_cast<long>(a.rows.size()) != a.steps + 1)
    throw ConfigError("difference windows need every step recorded");
}

}  // namespace

std::vector<CompositeNorms> difference_windows(const TrajectoryRecord& a,
                                               const TrajectoryRecord& b, const EigenData& eigen,
                                               const TimeProfile& eps, EpsWeight weight) {
  check_shared(a, b);
  const int n = eigen.size();
  const int K = a.window_steps;
  const std::size_t nodes = static_cast<std::size_t>(K) + a.rows.size();
  std::vector<double> times(nodes), l2(nodes), gr(nodes), lp(nodes), diff(n);
  auto put = [&](std::size_t i, double t, const double* x, const double* y) {
    for (int j = 0; j < n; ++j) diff[j] = x[j] - y[j];
    const NormBundle nb = norms(diff.data(), eigen, 0.0);
    times[i] = t;
    l2[i] = nb.l2_sq;
    gr[i] = nb.grad_sq;
    lp[i] = nb.lap_sq;
  };
  for (int i = 0; i < K; ++i)
    put(i, a.initial_segment.node_time(i), a.initial_segment.node_state(i),
        b.initial_segment.node_state(i));
  for (std::size_t r = 0; r < a.rows.size(); ++r)
    put(K + r, a.rows[r].t, a.rows[r].state.data(), b.rows[r].state.data());
  return sliding_composite_norms(times.data(), l2.data(), gr.data(), lp.data(), nodes, K, eps,
                                 weight);
}

std::vector<ContractionRow> contraction_report(const TrajectoryRecord& a,
                                               const TrajectoryRecord& b,
                                               const BoundConstants& c, const ProblemSpec& spec,
                                               EpsWeight weight) {
  const EigenData eig = eigenvalues(spec.domain);
  const std::vector<CompositeNorms> w = difference_windows(a, b, eig, spec.epsilon, weight);
  const std::size_t m = a.rows.size();
  const int n = eig.size();
  std::vector<double> diff_l2(m), sum_c(m), diff(n);
  for (std::size_t r = 0; r < m; ++r) {
    for (int j = 0; j < n; ++j) diff[j] = a.rows[r].state[j] - b.rows[r].state[j];
    diff_l2[r] = norms(diff.data(), eig, 0.0).l2_sq;
    sum_c[r] = a.rows[r].window.c_l2_sq + b.rows[r].window.c_l2_sq;
  }
  const double h = a.dt;
  const std::vector<double> s = quadrature::cumulative_simpson(diff_l2, h);
  const std::vector<double> q = quadrature::discounted_cumulative_simpson(sum_c, h, 4.0 * c.eta);
  const double k = spec.delay.window();
  const double tau = a.tau;
  const double initial = w.front().c_l2_sq + spec.epsilon.bound() * w.front().c_grad_sq;
  const double lift = std::exp(4.0 * c.eta * k);
  std::vector<ContractionRow> out(m);
  for (std::size_t r = 0; r < m; ++r) {
    ContractionRow& row = out[r];
    row.t = a.rows[r].t;
    row.lhs = w[r].c_ht_sq;
    row.initial = initial;
    row.decay = std::exp(-2.0 * c.eta1 * (row.t - k - tau));
    const double sr = std::max(0.0, s[r]);
    row.psi = 2.0 * spec.nonlinearity.eta_tilde * sr +
              4.0 * c.c_g * std::sqrt(std::max(0.0, lift * q[r])) * std::sqrt(sr);
    row.rhs = row.initial * row.decay + row.psi;
    row.slack = row.rhs - row.lhs;
  }
  return out;
}

double contraction_functional(const TrajectoryRecord& a, const TrajectoryRecord& b,
                              const BoundConstants& c, const ProblemSpec& spec) {
  const auto rows = contraction_report(a, b, c, spec);
  return rows.back().psi;
}

}  // namespace pblab
