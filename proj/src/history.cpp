#include "pblab/history.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "pblab/errors.hpp"

namespace pblab {

HistorySegment::HistorySegment(int dim, double dt, int window_steps, double origin)
    : dim_(dim), dt_(dt), window_steps_(window_steps), origin_(origin) {
  if (dim < 1) throw ConfigError("segment dimension must be positive");
  if (!(dt > 0.0)) throw ConfigError("segment step must be positive");
  if (window_steps < 1) throw ConfigError("segment window must span at least one step");
  const std::size_t cap = static_cast<std::size_t>(window_steps + 1) * dim;
  states_.assign(cap, 0.0);
  left_.assign(cap, 0.0);
  right_.assign(cap, 0.0);
}

void HistorySegment::push(long index, const double* state, const double* derivative) {
  if (count_ > 0 && index != latest_index_ + 1)
    throw ConfigError("history nodes must be pushed in order");
  const int cap = window_steps_ + 1;
  if (count_ == cap) {
    head_ = (head_ + 1) % cap;
    --count_;
  }
  ++count_;
  latest_index_ = index;
  const std::size_t s = slot(count_ - 1) * dim_;
  std::copy(state, state + dim_, states_.begin() + s);
  std::copy(derivative, derivative + dim_, left_.begin() + s);
  std::copy(derivative, derivative + dim_, right_.begin() + s);
}

void HistorySegment::set_latest_right_derivative(const double* derivative) {
  if (count_ == 0) throw ConfigError("empty history segment");
  std::copy(derivative, derivative + dim_, right_.begin() + slot(count_ - 1) * dim_);
}

void HistorySegment::sample(double theta, double* out) const {
  const double k = window();
  if (!(theta <= 0.0) || theta < -k * (1.0 + 1e-12))
    throw OutOfWindow("theta " + std::to_string(theta) + " outside [-k, 0]");
  if (theta == 0.0) {
    std::copy(latest_state(), latest_state() + dim_, out);
    return;
  }
  evaluate(latest_time() + theta, out);
}

void HistorySegment::evaluate(double s, double* out) const { evaluate_prefix(s, dim_, out); }

void HistorySegment::evaluate_prefix(double s, int count, double* out) const {
  if (count_ == 0) throw OutOfWindow("empty history segment");
  const double p = (s - node_time(0)) / dt_;
  const double last = count_ - 1;
  if (!(p >= -1e-9) || p > last + 1.0 + 1e-9)
    throw OutOfWindow("lookup time " + std::to_string(s) + " outside stored segment");
  const double r = std::round(p);
  if (std::abs(p - r) < 1e-9 && r <= last) {
    const double* y = node_state(static_cast<int>(std::max(r, 0.0)));
    std::copy(y, y + count, out);
    return;
  }
  if (count_ == 1) {
    std::copy(node_state(0), node_state(0) + count, out);
    return;
  }
  int i = static_cast<int>(std::floor(p));
  i = std::clamp(i, 0, count_ - 2);
  const double u = p - i;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u) * dt_;
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1) * dt_;
  const double* y0 = node_state(i);
  const double* y1 = node_state(i + 1);
  const double* d0 = node_right_derivative(i);
  const double* d1 = node_left_derivative(i + 1);
  for (int c = 0; c < count; ++c) out[c] = h00 * y0[c] + h10 * d0[c] + h01 * y1[c] + h11 * d1[c];
}

namespace {

double weight_at(const TimeProfile& eps, EpsWeight weight, double t_arg, double t_now,
                 double eps_min_abs, double eps_max_abs) {
  switch (weight) {
    case EpsWeight::argmax_node:
      return std::abs(eps.value(t_arg));
    case EpsWeight::current:
      return std::abs(eps.value(t_now));
    case EpsWeight::window_min:
      return eps_min_abs;
    case EpsWeight::window_max:
      return eps_max_abs;
  }
  return 0.0;
}

}  // namespace

CompositeNorms composite_norms(const double* times, const double* l2_sq, const double* grad_sq,
                               const double* lap_sq, std::size_t n, const TimeProfile& eps,
                               EpsWeight weight) {
  CompositeNorms c;
  if (n == 0) return c;
  std::size_t ig = 0, il = 0;
  double emin = std::numeric_limits<double>::infinity(), emax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    c.c_l2_sq = std::max(c.c_l2_sq, l2_sq[i]);
    if (grad_sq[i] >= grad_sq[ig]) ig = i;
    if (lap_sq[i] >= lap_sq[il]) il = i;
    if (weight == EpsWeight::window_min || weight == EpsWeight::window_max) {
      const double e = std::abs(eps.value(times[i]));
      emin = std::min(emin, e);
      emax = std::max(emax, e);
    }
  }
  c.c_grad_sq = grad_sq[ig];
  c.c_lap_sq = lap_sq[il];
  c.eps_ht = weight_at(eps, weight, times[ig], times[n - 1], emin, emax);
  c.eps_ht1 = weight_at(eps, weight, times[il], times[n - 1], emin, emax);
  c.c_ht_sq = c.c_l2_sq + c.eps_ht * c.c_grad_sq;
  c.c_ht1_sq = c.c_grad_sq + c.eps_ht1 * c.c_lap_sq;
  return c;
}

std::vector<CompositeNorms> sliding_composite_norms(const double* times, const double* l2_sq,
                                                    const double* grad_sq, const double* lap_sq,
                                                    std::size_t n, int window_steps,
                                                    const TimeProfile& eps, EpsWeight weight) {
  std::vector<CompositeNorms> out;
  const std::size_t w = static_cast<std::size_t>(window_steps);
  if (n <= w) return out;
  out.reserve(n - w);
  const bool need_eps = weight == EpsWeight::window_min || weight == EpsWeight::window_max;
  std::vector<double> eabs;
  if (need_eps) {
    eabs.resize(n);
    for (std::size_t i = 0; i < n; ++i) eabs[i] = std::abs(eps.value(times[i]));
  }
  // monotone deques of indices; ties keep the latest index
  std::deque<std::size_t> ql, qg, qp, qmin, qmax;
  auto push_max = [](std::deque<std::size_t>& q, const double* v, std::size_t i) {
    while (!q.empty() && v[q.back()] <= v[i]) q.pop_back();
    q.push_back(i);
  };
  for (std::size_t i = 0; i < n; ++i) {
    push_max(ql, l2_sq, i);
    push_max(qg, grad_sq, i);
    push_max(qp, lap_sq, i);
    if (need_eps) {
      while (!qmin.empty() && eabs[qmin.back()] >= eabs[i]) qmin.pop_back();
      qmin.push_back(i);
      while (!qmax.empty() && eabs[qmax.back()] <= eabs[i]) qmax.pop_back();
      qmax.push_back(i);
    }
    if (i < w) continue;
    const std::size_t lo = i - w;
    for (auto* q : {&ql, &qg, &qp, &qmin, &qmax})
      while (!q->empty() && q->front() < lo) q->pop_front();
    CompositeNorms c;
    c.c_l2_sq = l2_sq[ql.front()];
    c.c_grad_sq = grad_sq[qg.front()];
    c.c_lap_sq = lap_sq[qp.front()];
    const double emin = need_eps ? eabs[qmin.front()] : 0.0;
    const double emax = need_eps ? eabs[qmax.front()] : 0.0;
    c.eps_ht = weight_at(eps, weight, times[qg.front()], times[i], emin, emax);
    c.eps_ht1 = weight_at(eps, weight, times[qp.front()], times[i], emin, emax);
    c.c_ht_sq = c.c_l2_sq + c.eps_ht * c.c_grad_sq;
    c.c_ht1_sq = c.c_grad_sq + c.eps_ht1 * c.c_lap_sq;
    out.push_back(c);
  }
  return out;
}

namespace {

CompositeNorms composite_of(const HistorySegment& a, const HistorySegment* b,
                            const EigenData& eigen, const TimeProfile& eps, EpsWeight weight) {
  const int n = a.node_count();
  const int dim = eigen.size();
  if (a.dim() < dim) throw ConfigError("segment dimension below mode count");
  if (b != nullptr) {
    const double tol = 1e-9 * a.dt();
    if (b->node_count() != n || std::abs(b->dt() - a.dt()) > 1e-12 * a.dt() ||
        std::abs(b->node_time(0) - a.node_time(0)) > tol ||
        std::abs(b->latest_time() - a.latest_time()) > tol)
      throw TimestampMismatch("segments do not share node times");
  }
  std::vector<double> t(n), l2(n), g(n), p(n), diff(dim);
  for (int i = 0; i < n; ++i) {
    const double* y = a.node_state(i);
    if (b != nullptr) {
      const double* z = b->node_state(i);
      for (int j = 0; j < dim; ++j) diff[j] = y[j] - z[j];
      y = diff.data();
    }
    const NormBundle nb = norms(y, eigen, 0.0);
    t[i] = a.node_time(i);
    l2[i] = nb.l2_sq;
    g[i] = nb.grad_sq;
    p[i] = nb.lap_sq;
  }
  return composite_norms(t.data(), l2.data(), g.data(), p.data(), n, eps, weight);
}

}  // namespace

CompositeNorms segment_composite(const HistorySegment& segment, const EigenData& eigen,
                                 const TimeProfile& eps, EpsWeight weight) {
  return composite_of(segment, nullptr, eigen, eps, weight);
}

CompositeNorms difference_composite(const HistorySegment& a, const HistorySegment& b,
                                    const EigenData& eigen, const TimeProfile& eps,
                                    EpsWeight weight) {
  return composite_of(a, &b, eigen, eps, weight);
}

double sup_norm_sq(const HistorySegment& segment, SegmentNorm kind, const EigenData& eigen,
                   const TimeProfile& eps, EpsWeight weight) {
  const CompositeNorms c = segment_composite(segment, eigen, eps, weight);
  switch (kind) {
    case SegmentNorm::c_l2:
      return c.c_l2_sq;
    case SegmentNorm::c_ht:
      return c.c_ht_sq;
    case SegmentNorm::c_ht1:
      return c.c_ht1_sq;
  }
  return 0.0;
}

double sup_norm(const HistorySegment& segment, SegmentNorm kind, const EigenData& eigen,
                const TimeProfile& eps, EpsWeight weight) {
  return std::sqrt(sup_norm_sq(segment, kind, eigen, eps, weight));
}

}  // namespace pblab
