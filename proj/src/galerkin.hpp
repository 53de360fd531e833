#ifndef PBLAB_SRC_GALERKIN_HPP
#define PBLAB_SRC_GALERKIN_HPP

#include <string>
#include <vector>

#include "driver.hpp"
#include "pblab/errors.hpp"
#include "pblab/problem.hpp"
#include "pblab/spectral.hpp"

namespace pblab::detail {

// P f(u) in sine coefficients, skipping the transform when f is zero or linear.
class ReactionProjector {
 public:
  ReactionProjector(const ProblemSpec& spec, int grid, Backend backend)
      : f_(spec.nonlinearity), n_(spec.domain.mode_count) {
    zero_ = f_.is_zero();
    linear_ = f_.is_linear();
    if (!zero_ && !linear_) {
      tr_ = SineTransform(spec.domain.length, n_, grid, backend);
      values_.resize(grid);
    } else if (grid < minimum_grid(n_)) {
      throw GridTooCoarse("grid size " + std::to_string(grid) + " below 2N+1");
    }
  }

  void apply(const double* u, double* out) {
    if (zero_) {
      std::fill(out, out + n_, 0.0);
    } else if (linear_) {
      const double c = f_.linear_coefficient();
      for (int j = 0; j < n_; ++j) out[j] = c * u[j];
    } else {
      tr_.synthesize(u, values_.data());
      for (double& v : values_) v = f_.value(v);
      tr_.analyze(values_.data(), out);
    }
  }

 private:
  const Nonlinearity& f_;
  int n_;
  bool zero_ = true;
  bool linear_ = true;
  SineTransform tr_;
  std::vector<double> values_;
};

class GalerkinSystem {
 public:
  GalerkinSystem(const ProblemSpec& spec, int grid, Backend backend)
      : spec_(spec),
        eig_(eigenvalues(spec.domain)),
        n_(spec.domain.mode_count),
        reaction_(spec, grid, backend),
        f_(n_),
        h_(n_) {}

  int dim() const { return n_; }
  int delay_dim() const { return n_; }
  int channels() const { return 3; }
  const EigenData& eigen() const { return eig_; }

  void initial(double theta, double* y) const {
    for (int j = 0; j < n_; ++j)
      y[j] = j < static_cast<int>(spec_.initial_history.modes.size())
                 ? spec_.initial_history.modes[j].value(theta)
                 : 0.0;
  }
  void initial_derivative(double theta, double* y) const {
    for (int j = 0; j < n_; ++j)
      y[j] = j < static_cast<int>(spec_.initial_history.modes.size())
                 ? spec_.initial_history.modes[j].derivative(theta)
                 : 0.0;
  }

  void rhs(double t, const double* u, const double* g, double* du, NodeAux* aux) {
    const double eps = spec_.epsilon.value(t);
    const double l = nonlocal_value(u, n_, spec_.nonlocal);
    const double a = spec_.diffusion.value(l);
    reaction_.apply(u, f_.data());
    spec_.forcing.coefficients(t, h_);
    double fu = 0.0, grad = 0.0, l2 = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double lam = eig_.lambda[j];
      const double mass = 1.0 + eps * lam;
      if (!(mass > 0.0))
        throw DegenerateMass("1 + eps(t) lambda_j <= 0 at t=" + std::to_string(t));
      const double F = f_[j] + g[j] + h_[j];
      du[j] = (F - a * lam * u[j]) / mass;
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

  void scalars(const double* u, double* out) const {
    const NormBundle nb = norms(u, eig_, 0.0);
    out[0] = nb.l2_sq;
    out[1] = nb.grad_sq;
    out[2] = nb.lap_sq;
  }

 private:
  const ProblemSpec& spec_;
  EigenData eig_;
  int n_;
  ReactionProjector reaction_;
  std::vector<double> f_;
  std::vector<double> h_;
};

}  // namespace pblab::detail

#endif  // PBLAB_SRC_GALERKIN_HPP
