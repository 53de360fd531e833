#ifndef PBLAB_HISTORY_HPP
#define PBLAB_HISTORY_HPP

// The delayed segment u_t(theta) = u(t + theta), theta in [-k, 0], held as
// k/dt + 1 uniformly spaced nodes with cubic Hermite interpolation between
// them. Each node keeps two derivatives because the solution derivative can
// jump at the initial time: the left one belongs to the piece ending at the
// node, the right one to the piece starting there.

#include <cstddef>
#include <vector>

#include "pblab/problem.hpp"
#include "pblab/spectral.hpp"

namespace pblab {

class HistorySegment {
 public:
  HistorySegment() = default;
  // Node n sits at origin + n dt; the ring keeps window_steps + 1 nodes.
  HistorySegment(int dim, double dt, int window_steps, double origin);

  // Appends node `index` (must be latest_index() + 1 unless empty) with equal
  // left and right derivatives, evicting the oldest node when full.
  void push(long index, const double* state, const double* derivative);
  void set_latest_right_derivative(const double* derivative);

  int dim() const noexcept { return dim_; }
  double dt() const noexcept { return dt_; }
  int window_steps() const noexcept { return window_steps_; }
  double window() const noexcept { return window_steps_ * dt_; }
  double origin() const noexcept { return origin_; }
  int node_count() const noexcept { return count_; }
  bool full() const noexcept { return count_ == window_steps_ + 1; }
  long oldest_index() const noexcept { return latest_index_ - count_ + 1; }
  long latest_index() const noexcept { return latest_index_; }
  double time_of(long index) const noexcept { return origin_ + index * dt_; }
  double latest_time() const noexcept { return time_of(latest_index_); }

  // i = 0 is the oldest stored node
  double node_time(int i) const noexcept { return time_of(oldest_index() + i); }
  const double* node_state(int i) const noexcept { return states_.data() + slot(i) * dim_; }
  const double* node_left_derivative(int i) const noexcept { return left_.data() + slot(i) * dim_; }
  const double* node_right_derivative(int i) const noexcept {
    return right_.data() + slot(i) * dim_;
  }
  const double* latest_state() const noexcept { return node_state(count_ - 1); }

  // u(latest_time + theta); theta in [-k, 0], OutOfWindow otherwise. theta = 0
  // returns the latest node exactly.
  void sample(double theta, double* out) const;
  // u(s) for s in [oldest time, latest time + dt]; beyond the latest node the
  // last Hermite piece is extrapolated.
  void evaluate(double s, double* out) const;
  // As evaluate, restricted to the first `count` components.
  void evaluate_prefix(double s, int count, double* out) const;

 private:
  std::size_t slot(int i) const noexcept {
    return static_cast<std::size_t>((head_ + i) % (window_steps_ + 1));
  }

  int dim_ = 0;
  double dt_ = 0.0;
  int window_steps_ = 0;
  double origin_ = 0.0;
  int head_ = 0;
  int count_ = 0;
  long latest_index_ = -1;
  std::vector<double> states_;
  std::vector<double> left_;
  std::vector<double> right_;
};

// How the scalar weight |eps_t| of the composite segment norm is chosen.
enum class EpsWeight {
  argmax_node,  // eps at the node where the weighted term peaks (default)
  current,      // eps at the latest time
  window_min,   // min |eps| over the nodes
  window_max,   // max |eps| over the nodes
};

struct CompositeNorms {
  double c_l2_sq = 0.0;    // max ||u||^2
  double c_grad_sq = 0.0;  // max ||grad u||^2
  double c_lap_sq = 0.0;   // max ||Lap u||^2
  double c_ht_sq = 0.0;    // c_l2_sq + |eps| c_grad_sq
  double c_ht1_sq = 0.0;   // c_grad_sq + |eps| c_lap_sq
  double eps_ht = 0.0;     // the weights used
  double eps_ht1 = 0.0;
};

// Composite norms over n nodes given per-node squared norms.
CompositeNorms composite_norms(const double* times, const double* l2_sq, const double* grad_sq,
                               const double* lap_sq, std::size_t n, const TimeProfile& eps,
                               EpsWeight weight = EpsWeight::argmax_node);

// Composite norms of every window [i - window_steps, i], for i from
// window_steps to n - 1, in O(n). Entry i - window_steps of the result
// belongs to window end i.
std::vector<CompositeNorms> sliding_composite_norms(const double* times, const double* l2_sq,
                                                    const double* grad_sq, const double* lap_sq,
                                                    std::size_t n, int window_steps,
                                                    const TimeProfile& eps,
                                                    EpsWeight weight = EpsWeight::argmax_node);

enum class SegmentNorm { c_l2, c_ht, c_ht1 };

// Squared sup norm of a spectral segment over its stored nodes.
double sup_norm_sq(const HistorySegment& segment, SegmentNorm kind, const EigenData& eigen,
                   const TimeProfile& eps, EpsWeight weight = EpsWeight::argmax_node);
// sqrt of sup_norm_sq
double sup_norm(const HistorySegment& segment, SegmentNorm kind, const EigenData& eigen,
                const TimeProfile& eps, EpsWeight weight = EpsWeight::argmax_node);

CompositeNorms segment_composite(const HistorySegment& segment, const EigenData& eigen,
                                 const TimeProfile& eps, EpsWeight weight = EpsWeight::argmax_node);

// Composite norms of the node-wise difference a - b; both segments must share
// node times.
CompositeNorms difference_composite(const HistorySegment& a, const HistorySegment& b,
                                    const EigenData& eigen, const TimeProfile& eps,
                                    EpsWeight weight = EpsWeight::argmax_node);

}  // namespace pblab

#endif  // PBLAB_HISTORY_HPP
