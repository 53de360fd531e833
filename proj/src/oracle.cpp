#include "pblab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "driver.hpp"
#include "pblab/errors.hpp"
#include "pblab/spectral.hpp"
#include "record.hpp"

namespace pblab::oracle {

double single_mode_closed_form(double a0, double eps0, double lambda1, double c, double tau,
                               double t) {
  const double mass = 1.0 + eps0 * lambda1;
  if (!(mass > 0.0)) throw DegenerateMass("1 + eps0 lambda1 <= 0");
  return c * std::exp(-a0 * lambda1 * (t - tau) / mass);
}

namespace {

class FiniteDifferenceSystem {
 public:
  FiniteDifferenceSystem(const ProblemSpec& spec, int points)
      : spec_(spec), m_(points), h_(spec.domain.length / (points + 1)) {
    if (points < 3) throw ConfigError("finite-difference grid needs at least 3 points");
    const int n = spec.domain.mode_count;
    modes_ = n;
    basis_.resize(static_cast<std::size_t>(m_) * n);
    const double amp = std::sqrt(2.0 / spec.domain.length);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n; ++j)
        basis_[static_cast<std::size_t>(i) * n + j] =
            amp * std::sin((j + 1) * M_PI * (i + 1) * h_ / spec.domain.length);
    jgrid_.assign(m_, 0.0);
    const int nw = std::min<int>(n, static_cast<int>(spec.nonlocal.weights.size()));
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < nw; ++j)
        jgrid_[i] += spec.nonlocal.weights[j] * basis_[static_cast<std::size_t>(i) * n + j];
    coef_.resize(n);
    au_.resize(m_);
    rhs_.resize(m_);
    cp_.resize(m_);
    den_.resize(m_);
  }

  int dim() const { return m_; }
  int delay_dim() const { return m_; }
  int channels() const { return 3; }
  double spacing() const { return h_; }

  void initial(double theta, double* y) const {
    spec_.initial_history.value(theta, coef_);
    synth(coef_, y);
  }
  void initial_derivative(double theta, double* y) const {
    spec_.initial_history.derivative(theta, coef_);
    synth(coef_, y);
  }

  void rhs(double t, const double* u, const double* g, double* du, detail::NodeAux* aux) {
    const double eps = spec_.epsilon.value(t);
    double l = 0.0;
    for (int i = 0; i < m_; ++i) l += jgrid_[i] * u[i];
    l *= h_;
    const double a = spec_.diffusion.value(l);
    apply_a(u, au_.data());
    spec_.forcing.coefficients(t, coef_);
    synth(coef_, rhs_.data());
    double fu = 0.0, grad = 0.0, l2 = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double F = spec_.nonlinearity.value(u[i]) + g[i] + rhs_[i];
      if (aux != nullptr) {
        fu += F * u[i];
        grad += u[i] * au_[i];
        l2 += u[i] * u[i];
      }
      rhs_[i] = F - a * au_[i];
    }
    solve_mass(eps, rhs_.data(), du);
    if (aux != nullptr) {
      aux->a = a;
      aux->l = l;
      aux->energy = h_ * (l2 + eps * grad);
      aux->integrand = h_ * (2.0 * fu - (2.0 * a - spec_.epsilon.derivative(t)) * grad);
    }
  }

  void scalars(const double* u, double* out) const {
    std::vector<double>& au = scratch_;
    au.resize(m_);
    apply_a(u, au.data());
    double l2 = 0.0, grad = 0.0, lap = 0.0;
    for (int i = 0; i < m_; ++i) {
      l2 += u[i] * u[i];
      grad += u[i] * au[i];
      lap += au[i] * au[i];
    }
    out[0] = h_ * l2;
    out[1] = h_ * grad;
    out[2] = h_ * lap;
  }

  NormBundle bundle(const double* u, double eps) const {
    double s[3];
    scalars(u, s);
    NormBundle nb;
    nb.l2_sq = s[0];
    nb.grad_sq = s[1];
    nb.lap_sq = s[2];
    // u . A^{-1} u by a tridiagonal solve of A
    std::vector<double> w(m_), c(m_), d(m_);
    const double off = -1.0 / (h_ * h_), diag = 2.0 / (h_ * h_);
    c[0] = off / diag;
    d[0] = u[0] / diag;
    for (int i = 1; i < m_; ++i) {
      const double den = diag - off * c[i - 1];
      c[i] = off / den;
      d[i] = (u[i] - off * d[i - 1]) / den;
    }
    w[m_ - 1] = d[m_ - 1];
    for (int i = m_ - 2; i >= 0; --i) w[i] = d[i] - c[i] * w[i + 1];
    double hm = 0.0;
    for (int i = 0; i < m_; ++i) hm += u[i] * w[i];
    nb.hminus1_sq = h_ * hm;
    nb.ht_sq = nb.l2_sq + eps * nb.grad_sq;
    nb.ht1_sq = nb.grad_sq + std::abs(eps) * nb.lap_sq;
    return nb;
  }

 private:
  void synth(const std::vector<double>& c, double* y) const {
    for (int i = 0; i < m_; ++i) {
      const double* row = basis_.data() + static_cast<std::size_t>(i) * modes_;
      double s = 0.0;
      for (int j = 0; j < modes_; ++j) s += row[j] * c[j];
      y[i] = s;
    }
  }

  void apply_a(const double* u, double* out) const {
    const double inv = 1.0 / (h_ * h_);
    for (int i = 0; i < m_; ++i) {
      const double left = i > 0 ? u[i - 1] : 0.0;
      const double right = i + 1 < m_ ? u[i + 1] : 0.0;
      out[i] = inv * (2.0 * u[i] - left - right);
    }
  }

  // Thomas algorithm on I + eps A, refactored when eps moves by more than
  // 1e-12 relative.
  void solve_mass(double eps, const double* b, double* x) {
    if (!factored_ || std::abs(eps - eps_factored_) > 1e-12 * std::abs(eps_factored_)) {
      const double diag = 1.0 + 2.0 * eps / (h_ * h_);
      const double off = -eps / (h_ * h_);
      if (!(diag > 0.0)) throw DegenerateMass("I + eps A is not positive definite");
      den_[0] = diag;
      cp_[0] = off / diag;
      for (int i = 1; i < m_; ++i) {
        den_[i] = diag - off * cp_[i - 1];
        if (!(den_[i] > 0.0)) throw DegenerateMass("I + eps A is not positive definite");
        cp_[i] = off / den_[i];
      }
      off_ = off;
      eps_factored_ = eps;
      factored_ = true;
    }
    x[0] = b[0] / den_[0];
    for (int i = 1; i < m_; ++i) x[i] = (b[i] - off_ * x[i - 1]) / den_[i];
    for (int i = m_ - 2; i >= 0; --i) x[i] -= cp_[i] * x[i + 1];
  }

  const ProblemSpec& spec_;
  int m_;
  int modes_ = 0;
  double h_;
  std::vector<double> basis_;
  std::vector<double> jgrid_;
  mutable std::vector<double> coef_;
  mutable std::vector<double> scratch_;
  std::vector<double> au_, rhs_, cp_, den_;
  double off_ = 0.0;
  double eps_factored_ = 0.0;
  bool factored_ = false;
};

}  // namespace

TrajectoryRecord finite_difference_reference(const ProblemSpec& spec, const SolverConfig& cfg,
                                             double tau, double t_end, int points) {
  cfg.validate(spec.domain, spec.delay.window());
  const int K = cfg.window_steps(spec.delay.window());
  const long steps = cfg.step_count(tau, t_end);
  FiniteDifferenceSystem sys(spec, points);
  detail::MethodOfSteps<FiniteDifferenceSystem> mos(sys, spec.delay, tau, cfg.dt, K);
  const detail::RunData run = mos.run(steps, cfg.record_every, cfg.overflow_guard);
  TrajectoryRecord rec =
      detail::make_record(run, spec, cfg.eps_weight, Representation::grid, t_end,
                          [&sys](const double* u, double eps) { return sys.bundle(u, eps); });
  rec.grid_spacing = sys.spacing();
  return rec;
}

double grid_l2_distance(const std::vector<double>& coeffs, const std::vector<double>& grid_values,
                        double length) {
  const int m = static_cast<int>(grid_values.size());
  const double h = length / (m + 1);
  const double amp = std::sqrt(2.0 / length);
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = (i + 1) * h;
    double u = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
      u += coeffs[j] * amp * std::sin((j + 1) * M_PI * x / length);
    const double d = u - grid_values[i];
    s += d * d;
  }
  return std::sqrt(h * s);
}

}  // namespace pblab::oracle
