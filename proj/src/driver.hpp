#ifndef PBLAB_SRC_DRIVER_HPP
#define PBLAB_SRC_DRIVER_HPP

// Method-of-steps classical RK4 shared by the Galerkin, finite-difference and
// decomposed systems. A System provides
//
//   int dim() const;          state size
//   int delay_dim() const;    leading components seen by the delay operator
//   int channels() const;     per-node scalars recorded for window norms
//   void initial(double theta, double* y) const;
//   void initial_derivative(double theta, double* y) const;
//   void rhs(double t, const double* y, const double* g, double* dy, NodeAux* aux);
//   void scalars(const double* y, double* out) const;
//
// where g is the delay term sum_q w_q y(t + theta_q) over the first
// delay_dim() components. Lookups at or before tau read the initial history
// exactly; later ones use the Hermite segment.

#include <cmath>
#include <string>
#include <vector>

#include "pblab/errors.hpp"
#include "pblab/history.hpp"
#include "pblab/problem.hpp"
#include "pblab/quadrature.hpp"

namespace pblab::detail {

struct NodeAux {
  double a = 0.0;
  double l = 0.0;
  double energy = 0.0;     // ||u||^2 + eps ||grad u||^2
  double integrand = 0.0;  // 2 (F, u) - (2a - eps') ||grad u||^2
};

struct RunData {
  double tau = 0.0;
  double dt = 0.0;
  int window_steps = 0;
  long steps = 0;
  int channels = 0;
  // node n = -window_steps .. steps lives at index n + window_steps
  std::vector<double> times;
  std::vector<std::vector<double>> scalars;  // [channel][node]
  // per step n = 0 .. steps
  std::vector<double> a, l, energy, integrand;
  std::vector<long> recorded;  // step indices with stored states
  std::vector<std::vector<double>> states;
  HistorySegment initial_segment;
  HistorySegment final_segment;
};

template <class System>
class MethodOfSteps {
 public:
  MethodOfSteps(System& sys, const DelayKernel& delay, double tau, double dt, int window_steps)
      : sys_(sys), delay_(delay), tau_(tau), dt_(dt), window_steps_(window_steps) {}

  RunData run(long steps, int record_every, double overflow_guard) {
    const int dim = sys_.dim();
    const int nd = sys_.delay_dim();
    const int nc = sys_.channels();
    const int K = window_steps_;

    RunData out;
    out.tau = tau_;
    out.dt = dt_;
    out.window_steps = K;
    out.steps = steps;
    out.channels = nc;
    const std::size_t nodes = static_cast<std::size_t>(K + steps + 1);
    out.times.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) out.times[i] = time_of(static_cast<long>(i) - K);
    out.scalars.assign(nc, std::vector<double>(nodes, 0.0));
    out.a.resize(steps + 1);
    out.l.resize(steps + 1);
    out.energy.resize(steps + 1);
    out.integrand.resize(steps + 1);

    history_ = HistorySegment(dim, dt_, K, tau_);
    std::vector<double> y(dim), dy(dim), sc(nc);
    for (long n = -K; n <= 0; ++n) {
      const double theta = n * dt_;
      sys_.initial(theta, y.data());
      sys_.initial_derivative(theta, dy.data());
      history_.push(n, y.data(), dy.data());
      store_scalars(out, n, y.data(), sc);
    }

    g_.assign(nd, 0.0);
    look_.assign(dim, 0.0);
    NodeAux aux;
    std::vector<double> d(dim);
    sys_.initial(0.0, y.data());
    eval(tau_, y.data(), d.data(), &aux);
    history_.set_latest_right_derivative(d.data());
    out.initial_segment = history_;
    store_aux(out, 0, aux);
    record(out, 0, y, steps, record_every);

    std::vector<double> k2(dim), k3(dim), k4(dim), ys(dim), next(dim), dnext(dim);
    for (long n = 0; n < steps; ++n) {
      const double th = time_of(n) + 0.5 * dt_;
      const double t1 = time_of(n + 1);
      for (int c = 0; c < dim; ++c) ys[c] = y[c] + 0.5 * dt_ * d[c];
      eval(th, ys.data(), k2.data(), nullptr);
      for (int c = 0; c < dim; ++c) ys[c] = y[c] + 0.5 * dt_ * k2[c];
      eval(th, ys.data(), k3.data(), nullptr);
      for (int c = 0; c < dim; ++c) ys[c] = y[c] + dt_ * k3[c];
      eval(t1, ys.data(), k4.data(), nullptr);
      for (int c = 0; c < dim; ++c)
        next[c] = y[c] + dt_ / 6.0 * (d[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      for (int c = 0; c < dim; ++c)
        if (!std::isfinite(next[c]))
          throw NonFinite("non-finite state at t=" + std::to_string(t1));
      eval(t1, next.data(), dnext.data(), &aux);
      history_.push(n + 1, next.data(), dnext.data());
      y.swap(next);
      d.swap(dnext);
      store_scalars(out, n + 1, y.data(), sc);
      if (!(out.scalars[0][n + 1 + K] <= overflow_guard))
        throw NonFinite("state norm exceeded overflow guard at t=" + std::to_string(t1));
      store_aux(out, n + 1, aux);
      record(out, n + 1, y, steps, record_every);
    }
    out.final_segment = history_;
    return out;
  }

 private:
  double time_of(long n) const { return tau_ + n * dt_; }

  void eval(double t, const double* y, double* dy, NodeAux* aux) {
    const int nd = static_cast<int>(g_.size());
    std::fill(g_.begin(), g_.end(), 0.0);
    if (!delay_.is_zero()) {
      for (const DelayTap& tap : delay_.taps(t)) {
        const double s = t + tap.theta;
        const double* src;
        if (tap.theta == 0.0) {
          src = y;
        } else if (s <= tau_) {
          sys_.initial(s - tau_, look_.data());
          src = look_.data();
        } else {
          history_.evaluate_prefix(s, nd, look_.data());
          src = look_.data();
        }
        for (int c = 0; c < nd; ++c) g_[c] += tap.weight * src[c];
      }
    }
    sys_.rhs(t, y, g_.data(), dy, aux);
  }

  void store_scalars(RunData& out, long n, const double* y, std::vector<double>& sc) const {
    sys_.scalars(y, sc.data());
    const std::size_t idx = static_cast<std::size_t>(n + window_steps_);
    for (int c = 0; c < out.channels; ++c) out.scalars[c][idx] = sc[c];
  }

  static void store_aux(RunData& out, long n, const NodeAux& aux) {
    out.a[n] = aux.a;
    out.l[n] = aux.l;
    out.energy[n] = aux.energy;
    out.integrand[n] = aux.integrand;
  }

  static void record(RunData& out, long n, const std::vector<double>& y, long steps,
                     int record_every) {
    if (n % record_every == 0 || n == steps) {
      out.recorded.push_back(n);
      out.states.push_back(y);
    }
  }

  System& sys_;
  const DelayKernel& delay_;
  double tau_;
  double dt_;
  int window_steps_;
  HistorySegment history_;
  std::vector<double> g_;
  std::vector<double> look_;
};

}  // namespace pblab::detail

#endif  // PBLAB_SRC_DRIVER_HPP
