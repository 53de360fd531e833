#include "pblab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pblab/errors.hpp"
#include "pblab/kernels.hpp"

namespace pblab {

EigenData eigenvalues(const DomainSpec& domain) {
  domain.validate();
  EigenData e;
  e.length = domain.length;
  e.lambda.resize(domain.mode_count);
  for (int j = 1; j <= domain.mode_count; ++j) {
    const double r = j * M_PI / domain.length;
    e.lambda[j - 1] = r * r;
  }
  return e;
}

NormBundle norms(const double* u, const EigenData& eigen, double eps_value) {
  NormBundle n;
  const int size = eigen.size();
  for (int j = 0; j < size; ++j) {
    const double lam = eigen.lambda[j];
    const double u2 = u[j] * u[j];
    n.l2_sq += u2;
    n.grad_sq += lam * u2;
    n.lap_sq += lam * lam * u2;
    n.hminus1_sq += u2 / lam;
  }
  n.ht_sq = n.l2_sq + eps_value * n.grad_sq;
  n.ht1_sq = n.grad_sq + std::abs(eps_value) * n.lap_sq;
  return n;
}

NormBundle norms(const SpectralField& field, const EigenData& eigen, double eps_value) {
  if (static_cast<int>(field.coefficients.size()) != eigen.size())
    throw ConfigError("field size does not match mode count");
  return norms(field.coefficients.data(), eigen, eps_value);
}

double nonlocal_value(const double* coeffs, int modes, const NonlocalFunctional& l) {
  const int n = std::min<int>(modes, static_cast<int>(l.weights.size()));
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += l.weights[j] * coeffs[j];
  return s;
}

double nonlocal_value(const SpectralField& field, const NonlocalFunctional& l) {
  return nonlocal_value(field.coefficients.data(), static_cast<int>(field.coefficients.size()), l);
}

int minimum_grid(int modes) { return 2 * modes + 1; }
int default_grid(int modes) { return 3 * modes + 1; }

SineTransform::SineTransform(double length, int modes, int grid, Backend backend)
    : modes_(modes), grid_(grid), spacing_(length / (grid + 1)) {
  if (modes < 1) throw ConfigError("transform needs at least one mode");
  if (grid < minimum_grid(modes))
    throw GridTooCoarse("grid size " + std::to_string(grid) + " below 2N+1 = " +
                        std::to_string(minimum_grid(modes)));
  switch (backend) {
    case Backend::serial:
      parallel_ = false;
      break;
    case Backend::parallel:
      parallel_ = true;
      break;
    case Backend::automatic:
      parallel_ = static_cast<long>(grid) * modes >= 65536;
      break;
  }
  const double amp = std::sqrt(2.0 / length);
  table_.resize(static_cast<std::size_t>(grid) * modes);
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < modes; ++j)
      table_[static_cast<std::size_t>(i) * modes + j] =
          amp * std::sin(static_cast<double>(j + 1) * (i + 1) * M_PI / (grid + 1));
}

void SineTransform::synthesize(const double* coeffs, double* values) const {
  if (parallel_)
    kernels::parallel::synthesize(table_.data(), grid_, modes_, coeffs, values);
  else
    kernels::serial::synthesize(table_.data(), grid_, modes_, coeffs, values);
}

void SineTransform::analyze(const double* values, double* coeffs) const {
  if (parallel_)
    kernels::parallel::analyze(table_.data(), grid_, modes_, spacing_, values, coeffs);
  else
    kernels::serial::analyze(table_.data(), grid_, modes_, spacing_, values, coeffs);
}

SpectralField apply_pointwise(const SpectralField& field, const std::function<double(double)>& fn,
                              int grid_size, double length) {
  const int n = static_cast<int>(field.coefficients.size());
  SineTransform tr(length, n, grid_size);
  std::vector<double> values(grid_size);
  tr.synthesize(field.coefficients.data(), values.data());
  for (double& v : values) v = fn(v);
  SpectralField out;
  out.timestamp = field.timestamp;
  out.coefficients.resize(n);
  tr.analyze(values.data(), out.coefficients.data());
  return out;
}

}  // namespace pblab
