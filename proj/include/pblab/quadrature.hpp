#ifndef PBLAB_QUADRATURE_HPP
#define PBLAB_QUADRATURE_HPP

// Cumulative Simpson rules on uniformly spaced samples.

#include <cmath>
#include <cstddef>
#include <vector>

namespace pblab::quadrature {

// s[n] = int_{x_0}^{x_n} f. Even nodes close Simpson pairs; an odd node adds
// the 3-point rule for its last interval, taken from inside the enclosing
// pair when one exists so that kinks sitting on even nodes are never
// straddled.
inline std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> s(n, 0.0);
  if (n < 2) return s;
  if (n == 2) {
    s[1] = 0.5 * h * (f[0] + f[1]);
    return s;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (i % 2 == 0)
      s[i] = s[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    else if (i + 1 < n)
      s[i] = s[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
    else
      s[i] = s[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
  }
  return s;
}

// s[n] = int_{x_0}^{x_n} e^{-rate (x_n - x)} f(x) dx with the same node
// pattern as cumulative_simpson, carried by recurrence so that large
// rate * (x_n - x_0) never overflows.
inline std::vector<double> discounted_cumulative_simpson(const std::vector<double>& f, double h,
                                                         double rate) {
  const std::size_t n = f.size();
  std::vector<double> s(n, 0.0);
  if (n < 2) return s;
  const double e1 = std::exp(-rate * h);
  const double e2 = e1 * e1;
  if (n == 2) {
    s[1] = 0.5 * h * (e1 * f[0] + f[1]);
    return s;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (i % 2 == 0)
      s[i] = e2 * s[i - 2] + h / 3.0 * (e2 * f[i - 2] + 4.0 * e1 * f[i - 1] + f[i]);
    else if (i + 1 < n)
      s[i] = e1 * s[i - 1] + h / 12.0 * (5.0 * e1 * f[i - 1] + 8.0 * f[i] - f[i + 1] / e1);
    else
      s[i] = e1 * s[i - 1] + h / 12.0 * (-e2 * f[i - 2] + 8.0 * e1 * f[i - 1] + 5.0 * f[i]);
  }
  return s;
}

// int_a^b f by composite Simpson with `intervals` (rounded up to even) pieces.
template <class F>
double simpson(const F& f, double a, double b, int intervals) {
  if (intervals < 2) intervals = 2;
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace pblab::quadrature

#endif  // PBLAB_QUADRATURE_HPP
