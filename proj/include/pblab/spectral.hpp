#ifndef PBLAB_SPECTRAL_HPP
#define PBLAB_SPECTRAL_HPP

// Dirichlet sine eigenbasis of -Laplacian on (0, L):
//   omega_j(x) = sqrt(2/L) sin(j pi x / L),  lambda_j = (j pi / L)^2.

#include <functional>
#include <vector>

#include "pblab/problem.hpp"

namespace pblab {

struct EigenData {
  double length = 0.0;
  std::vector<double> lambda;  // lambda[j-1] = lambda_j

  double lambda1() const { return lambda.front(); }
  int size() const { return static_cast<int>(lambda.size()); }
};

EigenData eigenvalues(const DomainSpec& domain);

struct SpectralField {
  std::vector<double> coefficients;
  double timestamp = 0.0;
};

struct NormBundle {
  double l2_sq = 0.0;
  double grad_sq = 0.0;
  double lap_sq = 0.0;
  double hminus1_sq = 0.0;
  double ht_sq = 0.0;
  double ht1_sq = 0.0;
};

NormBundle norms(const double* coeffs, const EigenData& eigen, double eps_value);
NormBundle norms(const SpectralField& field, const EigenData& eigen, double eps_value);

// sum_j weights_j u_j, missing weights read as zero
double nonlocal_value(const double* coeffs, int modes, const NonlocalFunctional& l);
double nonlocal_value(const SpectralField& field, const NonlocalFunctional& l);

enum class Backend { serial, parallel, automatic };

// Synthesis and analysis on the interior grid x_i = i L / (G + 1), i = 1..G.
// Analysis is the DST-I quadrature h sum_i omega_j(x_i) v_i with
// h = L / (G + 1), which inverts synthesis exactly for modes j <= G.
class SineTransform {
 public:
  SineTransform() = default;
  SineTransform(double length, int modes, int grid, Backend backend = Backend::automatic);

  int modes() const noexcept { return modes_; }
  int grid() const noexcept { return grid_; }
  double spacing() const noexcept { return spacing_; }
  double node(int i) const noexcept { return (i + 1) * spacing_; }  // 0-based

  void synthesize(const double* coeffs, double* values) const;
  void analyze(const double* values, double* coeffs) const;

  const std::vector<double>& table() const noexcept { return table_; }

 private:
  int modes_ = 0;
  int grid_ = 0;
  double spacing_ = 0.0;
  bool parallel_ = false;
  std::vector<double> table_;
};

// Smallest admissible grid for N modes, and the default 3N + 1.
int minimum_grid(int modes);
int default_grid(int modes);

// Sine coefficients of fn(u(x)), by synthesis, pointwise map and analysis.
// Throws GridTooCoarse when grid_size < 2N + 1.
SpectralField apply_pointwise(const SpectralField& field, const std::function<double(double)>& fn,
                              int grid_size, double length);

}  // namespace pblab

#endif  // PBLAB_SPECTRAL_HPP
