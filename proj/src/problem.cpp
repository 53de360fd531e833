#include "pblab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "pblab/errors.hpp"

namespace pblab {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(8);
  os << x;
  return os.str();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(std::max(n, 1));
  if (n <= 1) {
    out[0] = a;
    return out;
  }
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

double sech2(double x) {
  const double c = std::cosh(x);
  return std::isinf(c) ? 0.0 : 1.0 / (c * c);
}

}  // namespace

void DomainSpec::validate() const {
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigError("domain length must be positive and finite");
  if (mode_count < 1) throw ConfigError("mode_count must be at least 1");
}

// ---------------------------------------------------------------- TimeProfile

TimeProfile TimeProfile::constant(double value, double bound) {
  TimeProfile p;
  p.kind_ = Kind::constant;
  p.amplitude_ = value;
  p.bound_ = bound;
  return p;
}

TimeProfile TimeProfile::decreasing_tanh(double amplitude, double bound, double center,
                                         double width) {
  if (!(width > 0.0)) throw ConfigError("tanh profile width must be positive");
  TimeProfile p;
  p.kind_ = Kind::decreasing_tanh;
  p.amplitude_ = amplitude;
  p.bound_ = bound;
  p.center_ = center;
  p.width_ = width;
  return p;
}

TimeProfile TimeProfile::increasing_tanh(double amplitude, double bound, double center,
                                         double width) {
  TimeProfile p = decreasing_tanh(amplitude, bound, center, width);
  p.kind_ = Kind::increasing_tanh;
  return p;
}

TimeProfile TimeProfile::custom_sampled(std::vector<std::pair<double, double>> samples,
                                        double bound) {
  if (samples.size() < 2) throw ConfigError("custom epsilon profile needs at least 2 samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].first > samples[i - 1].first))
      throw ConfigError("custom epsilon sample times must be strictly increasing");
  TimeProfile p;
  p.kind_ = Kind::custom_sampled;
  p.bound_ = bound;
  p.samples_ = std::move(samples);
  const std::size_t n = p.samples_.size();
  p.slopes_.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    p.slopes_[i] = (p.samples_[i + 1].second - p.samples_[i - 1].second) /
                   (p.samples_[i + 1].first - p.samples_[i - 1].first);
  }
  return p;
}

double TimeProfile::value(double t) const {
  switch (kind_) {
    case Kind::constant:
      return amplitude_;
    case Kind::decreasing_tanh:
      return 1.0 + amplitude_ * (1.0 - std::tanh((t - center_) / width_)) / 2.0;
    case Kind::increasing_tanh:
      return 1.0 - amplitude_ * (1.0 - std::tanh((t - center_) / width_)) / 2.0;
    case Kind::custom_sampled: {
      if (t <= samples_.front().first) return samples_.front().second;
      if (t >= samples_.back().first) return samples_.back().second;
      auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                 [](double v, const auto& s) { return v < s.first; });
      const std::size_t i = static_cast<std::size_t>(it - samples_.begin()) - 1;
      const double h = samples_[i + 1].first - samples_[i].first;
      const double s = (t - samples_[i].first) / h;
      const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
      const double h10 = s * (1 - s) * (1 - s);
      const double h01 = s * s * (3 - 2 * s);
      const double h11 = s * s * (s - 1);
      return h00 * samples_[i].second + h10 * h * slopes_[i] + h01 * samples_[i + 1].second +
             h11 * h * slopes_[i + 1];
    }
  }
  return 0.0;
}

double TimeProfile::derivative(double t) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::decreasing_tanh:
      return -amplitude_ / (2.0 * width_) * sech2((t - center_) / width_);
    case Kind::increasing_tanh:
      return amplitude_ / (2.0 * width_) * sech2((t - center_) / width_);
    case Kind::custom_sampled: {
      if (t <= samples_.front().first || t >= samples_.back().first) return 0.0;
      auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                 [](double v, const auto& s) { return v < s.first; });
      const std::size_t i = static_cast<std::size_t>(it - samples_.begin()) - 1;
      const double h = samples_[i + 1].first - samples_[i].first;
      const double s = (t - samples_[i].first) / h;
      const double d00 = 6 * s * s - 6 * s;
      const double d10 = 3 * s * s - 4 * s + 1;
      const double d01 = -6 * s * s + 6 * s;
      const double d11 = 3 * s * s - 2 * s;
      return (d00 * samples_[i].second + d01 * samples_[i + 1].second) / h + d10 * slopes_[i] +
             d11 * slopes_[i + 1];
    }
  }
  return 0.0;
}

TimeProfile TimeProfile::with_bound(double bound) const {
  TimeProfile p = *this;
  p.bound_ = bound;
  return p;
}

TimeProfile TimeProfile::with_eps_min(double eps_min) const {
  TimeProfile p = *this;
  p.eps_min_ = eps_min;
  return p;
}

// --------------------------------------------------------------- DiffusionLaw

DiffusionLaw DiffusionLaw::constant(double value) {
  DiffusionLaw d;
  d.kind_ = Kind::constant;
  d.lower_ = d.upper_ = d.value_ = d.eval_lower_ = d.eval_upper_ = value;
  return d;
}

DiffusionLaw DiffusionLaw::tanh_ramp(double lower, double upper, double width) {
  if (!(width > 0.0)) throw ConfigError("diffusion width must be positive");
  DiffusionLaw d;
  d.kind_ = Kind::tanh_ramp;
  d.lower_ = d.eval_lower_ = lower;
  d.upper_ = d.eval_upper_ = upper;
  d.width_ = width;
  return d;
}

DiffusionLaw DiffusionLaw::rational(double lower, double upper, double width) {
  DiffusionLaw d = tanh_ramp(lower, upper, width);
  d.kind_ = Kind::rational;
  return d;
}

double DiffusionLaw::value(double s) const {
  switch (kind_) {
    case Kind::constant:
      return value_;
    case Kind::tanh_ramp:
      return eval_lower_ + (eval_upper_ - eval_lower_) * (1.0 + std::tanh(s / width_)) / 2.0;
    case Kind::rational: {
      const double s2 = s * s;
      if (std::isinf(s2)) return eval_upper_;
      return eval_lower_ + (eval_upper_ - eval_lower_) * s2 / (width_ * width_ + s2);
    }
  }
  return 0.0;
}

double DiffusionLaw::lipschitz_on(double /*radius*/) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::tanh_ramp:
      return std::abs(eval_upper_ - eval_lower_) / (2.0 * width_);
    case Kind::rational:
      return std::abs(eval_upper_ - eval_lower_) * 3.0 * std::sqrt(3.0) / (8.0 * width_);
  }
  return 0.0;
}

DiffusionLaw DiffusionLaw::with_declared_bounds(double lower, double upper) const {
  DiffusionLaw d = *this;
  d.lower_ = lower;
  d.upper_ = upper;
  return d;
}

double NonlocalFunctional::norm() const {
  double s = 0.0;
  for (double w : weights) s += w * w;
  return std::sqrt(s);
}

// --------------------------------------------------------------- Nonlinearity

double Nonlinearity::value(double u) const {
  double r = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) r = r * u + *it;
  return r;
}

double Nonlinearity::derivative(double u) const {
  double r = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 1;) r = r * u + k * coefficients[k];
  return r;
}

double Nonlinearity::antiderivative(double u) const {
  double r = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 0;) r = r * u + coefficients[k] / (k + 1.0);
  return r * u;
}

int Nonlinearity::degree() const {
  for (std::size_t k = coefficients.size(); k-- > 0;)
    if (coefficients[k] != 0.0) return static_cast<int>(k);
  return -1;
}

bool Nonlinearity::is_zero() const { return degree() < 0; }

bool Nonlinearity::is_linear() const {
  const int d = degree();
  return d < 0 || (d == 1 && coefficients[0] == 0.0);
}

double Nonlinearity::linear_coefficient() const {
  return coefficients.size() > 1 ? coefficients[1] : 0.0;
}

PotentialConstants derive_potential_constants(const Nonlinearity& f) {
  PotentialConstants pc;
  for (double u : linspace(-1.0, 1.0, 20001)) pc.local_sup = std::max(pc.local_sup, std::abs(f.value(u)));
  const double p = f.p;
  pc.c2 = f.c2 / (2.0 * p);
  pc.c1 = (f.c0 + f.c1) / p;
  if (f.c0 == 0.0) {
    pc.c0 = pc.local_sup + f.c2 / p;
  } else if (f.c2 == 0.0) {
    pc.c0 = std::numeric_limits<double>::infinity();
  } else {
    pc.c0 = pc.local_sup + f.c2 / p +
            (f.c0 / p) * std::max(0.0, std::log(2.0 * f.c0 / f.c2) - 1.0);
  }
  return pc;
}

// ---------------------------------------------------------------- DelayKernel

DelayKernel DelayKernel::discrete(double window, double lag, double gain, double lipschitz) {
  DelayKernel d;
  d.kind_ = Kind::discrete;
  d.window_ = window;
  d.lag_ = lag;
  d.gain_ = gain;
  d.lipschitz_ = lipschitz;
  return d;
}

DelayKernel DelayKernel::distributed(double window, std::vector<double> kernel, double lipschitz) {
  if (kernel.size() < 2) throw ConfigError("distributed delay kernel needs at least 2 samples");
  DelayKernel d;
  d.kind_ = Kind::distributed;
  d.window_ = window;
  d.lag_ = window;
  d.kernel_ = std::move(kernel);
  d.lipschitz_ = lipschitz;
  return d;
}

DelayKernel DelayKernel::variable(double window, double lag_mean, double lag_amplitude,
                                  double lag_frequency, double gain, double lipschitz) {
  DelayKernel d = discrete(window, lag_mean, gain, lipschitz);
  d.kind_ = Kind::variable;
  d.lag_amplitude_ = lag_amplitude;
  d.lag_frequency_ = lag_frequency;
  return d;
}

double DelayKernel::lag_at(double t) const {
  if (kind_ == Kind::variable) return lag_ + lag_amplitude_ * std::sin(lag_frequency_ * t);
  return lag_;
}

std::vector<DelayTap> DelayKernel::taps(double t) const {
  std::vector<DelayTap> out;
  switch (kind_) {
    case Kind::discrete:
    case Kind::variable:
      if (gain_ != 0.0) out.push_back({-lag_at(t), gain_});
      break;
    case Kind::distributed: {
      const std::size_t n = kernel_.size();
      const double dth = window_ / (n - 1);
      for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n ? 0.5 : 1.0) * dth * kernel_[i];
        if (w != 0.0) out.push_back({-window_ + i * dth, w});
      }
      break;
    }
  }
  return out;
}

bool DelayKernel::is_zero() const {
  if (kind_ == Kind::distributed)
    return std::all_of(kernel_.begin(), kernel_.end(), [](double v) { return v == 0.0; });
  return gain_ == 0.0;
}

double DelayKernel::intrinsic_lipschitz() const {
  double s = 0.0;
  for (const auto& tap : taps(0.0)) s += std::abs(tap.weight);
  return s * s;
}

DelayKernel DelayKernel::with_lipschitz(double lipschitz) const {
  DelayKernel d = *this;
  d.lipschitz_ = lipschitz;
  return d;
}

// -------------------------------------------------------------------- Forcing

double Forcing::coefficient(int j, double t) const {
  if (j < first_mode || j > last_mode) return 0.0;
  double v;
  if (j <= static_cast<int>(modes.size())) {
    const ForcingMode& m = modes[j - 1];
    v = m.base + m.amplitude * std::sin(m.frequency * t + m.phase);
  } else {
    if (tail_amplitude == 0.0) return 0.0;
    v = tail_amplitude * std::pow(static_cast<double>(j), tail_exponent);
  }
  return exp_rate == 0.0 ? v : v * std::exp(exp_rate * t);
}

void Forcing::coefficients(double t, std::vector<double>& out) const {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = coefficient(static_cast<int>(j) + 1, t);
}

bool Forcing::is_zero() const {
  if (last_mode < first_mode) return true;
  const int listed_end = std::min<int>(static_cast<int>(modes.size()), last_mode);
  for (int j = std::max(first_mode, 1); j <= listed_end; ++j) {
    const ForcingMode& m = modes[j - 1];
    if (m.base != 0.0 || m.amplitude != 0.0) return false;
  }
  return tail_amplitude == 0.0 || last_mode <= static_cast<int>(modes.size());
}

Forcing Forcing::restricted(int first, int last) const {
  Forcing f = *this;
  f.first_mode = std::max(first, first_mode);
  f.last_mode = std::min(last, last_mode);
  return f;
}

// ------------------------------------------------------------- InitialHistory

double HistoryMode::value(double theta) const {
  double v = constant + slope * theta;
  if (amplitude != 0.0) v += amplitude * std::sin(frequency * theta);
  if (exp_coefficient != 0.0) v += exp_coefficient * std::exp(exp_rate * theta);
  return v;
}

double HistoryMode::derivative(double theta) const {
  double v = slope;
  if (amplitude != 0.0) v += amplitude * frequency * std::cos(frequency * theta);
  if (exp_coefficient != 0.0) v += exp_coefficient * exp_rate * std::exp(exp_rate * theta);
  return v;
}

void InitialHistory::value(double theta, std::vector<double>& out) const {
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = j < modes.size() ? modes[j].value(theta) : 0.0;
}

void InitialHistory::derivative(double theta, std::vector<double>& out) const {
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = j < modes.size() ? modes[j].derivative(theta) : 0.0;
}

InitialHistory InitialHistory::scaled(double factor) const {
  InitialHistory h = *this;
  for (auto& m : h.modes) {
    m.constant *= factor;
    m.slope *= factor;
    m.amplitude *= factor;
    m.exp_coefficient *= factor;
  }
  return h;
}

bool InitialHistory::is_zero() const {
  return std::all_of(modes.begin(), modes.end(), [](const HistoryMode& m) {
    return m.constant == 0.0 && m.slope == 0.0 && m.amplitude == 0.0 && m.exp_coefficient == 0.0;
  });
}

// ---------------------------------------------------------------------- audit

bool AuditReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const HypothesisCheck* AuditReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<std::string> AuditReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name);
  return out;
}

ProfileExtent profile_extent(const TimeProfile& eps, const ProbeGrid& probes) {
  ProfileExtent e;
  e.sup_derivative = -std::numeric_limits<double>::infinity();
  e.inf_value = std::numeric_limits<double>::infinity();
  for (double t : linspace(probes.t_min, probes.t_max, probes.t_count)) {
    const double v = eps.value(t);
    const double d = eps.derivative(t);
    e.sup_abs_plus_derivative = std::max(e.sup_abs_plus_derivative, std::abs(v) + std::abs(d));
    e.sup_derivative = std::max(e.sup_derivative, d);
    e.sup_abs = std::max(e.sup_abs, std::abs(v));
    e.inf_value = std::min(e.inf_value, v);
  }
  return e;
}

namespace {

// Tracks the worst point of a "value <= limit" style check.
struct Tracker {
  HypothesisCheck check;
  double worst_excess = -std::numeric_limits<double>::infinity();

  explicit Tracker(std::string name) { check.name = std::move(name); }

  // Records value <= limit, tolerating `slack`.
  void observe(double value, double limit, double slack, const std::string& where) {
    const double excess = value - limit;
    if (!std::isfinite(value) || !std::isfinite(excess)) {
      if (check.passed || std::isfinite(worst_excess)) {
        check.passed = false;
        check.worst = value;
        check.limit = limit;
        check.witness = where;
        worst_excess = std::numeric_limits<double>::infinity();
      }
      return;
    }
    if (excess > worst_excess) {
      worst_excess = excess;
      check.worst = value;
      check.limit = limit;
      check.witness = where;
    }
    if (excess > slack) check.passed = false;
  }

  void fail(const std::string& where, double value = 0.0, double limit = 0.0) {
    check.passed = false;
    check.witness = where;
    check.worst = value;
    check.limit = limit;
    worst_excess = std::numeric_limits<double>::infinity();
  }
};

// Sign of the dominant term of sum_e c_e R^e as R -> infinity.
int asymptotic_sign(const std::map<double, double>& terms) {
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    if (it->second > 0.0) return 1;
    if (it->second < 0.0) return -1;
  }
  return 0;
}

void audit_growth_tail(const Nonlinearity& f, Tracker& tr) {
  const double p = f.p;
  for (int sigma : {1, -1}) {
    // f(u) u at u = sigma R is sum_k a_k sigma^{k+1} R^{k+1}
    std::map<double, double> upper, lower;
    upper[0.0] += f.c0;
    upper[p] -= f.c2;
    lower[0.0] += f.c0;
    lower[p] += f.c1;
    for (std::size_t k = 0; k < f.coefficients.size(); ++k) {
      const double a = f.coefficients[k] * ((k + 1) % 2 == 0 ? 1.0 : sigma);
      upper[k + 1.0] -= a;
      lower[k + 1.0] += a;
    }
    const std::string where = sigma > 0 ? "u -> +inf" : "u -> -inf";
    if (asymptotic_sign(upper) < 0) tr.fail(where + " (upper bound)");
    if (asymptotic_sign(lower) < 0) tr.fail(where + " (lower bound)");
  }
}

}  // namespace

AuditReport audit(const ProblemSpec& spec, const ProbeGrid& probes) {
  AuditReport rep;
  const double slack = probes.relative_slack;
  const auto ts = linspace(probes.t_min, probes.t_max, probes.t_count);
  const auto us = linspace(-probes.u_max, probes.u_max, probes.u_count);
  const auto ss = linspace(-probes.s_max, probes.s_max, probes.s_count);
  const TimeProfile& eps = spec.epsilon;
  const ProfileExtent ext = profile_extent(eps, probes);

  {
    Tracker tr("epsilon-limit");
    for (double t : linspace(probes.t_max, probes.t_max + probes.limit_horizon, 41))
      tr.observe(std::abs(eps.value(t) - 1.0), probes.limit_tolerance, 0.0, "t=" + fmt(t));
    rep.checks.push_back(tr.check);
  }
  {
    Tracker tr("epsilon-bound");
    for (double t : ts) {
      const double v = std::abs(eps.value(t)) + std::abs(eps.derivative(t));
      tr.observe(v, eps.bound(), slack * (1.0 + eps.bound()), "t=" + fmt(t));
    }
    rep.checks.push_back(tr.check);
  }
  {
    Tracker tr("epsilon-positive");
    for (double t : ts) tr.observe(-eps.value(t), -eps.eps_min(), 0.0, "t=" + fmt(t));
    tr.check.worst = -tr.check.worst;
    tr.check.limit = -tr.check.limit;
    rep.checks.push_back(tr.check);
  }

  const DiffusionLaw& a = spec.diffusion;
  {
    Tracker tr("diffusion-range");
    if (!(a.lower() > 0.0) || a.upper() < a.lower())
      tr.fail("declared bounds m=" + fmt(a.lower()) + " M=" + fmt(a.upper()), a.lower(), 0.0);
    for (double s : ss) {
      const double v = a.value(s);
      const double tol = slack * (1.0 + std::abs(v));
      tr.observe(v, a.upper(), tol, "s=" + fmt(s));
      tr.observe(a.lower(), v, tol, "s=" + fmt(s));
    }
    rep.checks.push_back(tr.check);
  }
  {
    Tracker tr("diffusion-coercivity");
    const double need = 0.5 * (3.0 + eps.bound() + ext.sup_derivative);
    // m must strictly exceed the threshold
    tr.observe(need, a.lower(), 0.0, "m=" + fmt(a.lower()) + " threshold=" + fmt(need));
    if (!(a.lower() > need)) tr.fail("m=" + fmt(a.lower()) + " threshold=" + fmt(need), a.lower(), need);
    tr.check.worst = a.lower();
    tr.check.limit = need;
    rep.checks.push_back(tr.check);
  }
  {
    Tracker tr("diffusion-lipschitz");
    const double lip = a.lipschitz_on(probes.s_max);
    for (std::size_t i = 1; i < ss.size(); ++i) {
      const double q = std::abs(a.value(ss[i]) - a.value(ss[i - 1])) / (ss[i] - ss[i - 1]);
      tr.observe(q, lip, 1e-9 * (1.0 + lip), "s=" + fmt(ss[i - 1]));
    }
    rep.checks.push_back(tr.check);
  }

  const double lambda1 = std::pow(M_PI / spec.domain.length, 2);
  {
    Tracker tr("dissipation-margin");
    const double lhs = 2.0 * a.lower() - ext.sup_derivative - 1.0 - 1.0 / lambda1;
    const double rhs = 1.0 + eps.bound();
    tr.observe(rhs, lhs, slack * (1.0 + rhs), "m=" + fmt(a.lower()) + " lambda1=" + fmt(lambda1));
    tr.check.worst = lhs;
    tr.check.limit = rhs;
    rep.checks.push_back(tr.check);
  }

  const Nonlinearity& f = spec.nonlinearity;
  {
    Tracker tr("nonlinearity-constants");
    if (!(f.p >= 2.0)) tr.fail("p=" + fmt(f.p), f.p, 2.0);
    for (double c : {f.c0, f.c1, f.c2, f.eta_tilde})
      if (!(c >= 0.0) || !std::isfinite(c)) tr.fail("negative or non-finite constant " + fmt(c), c);
    rep.checks.push_back(tr.check);
  }
  {
    Tracker tr("nonlinearity-one-sided-lipschitz");
    for (double u : us) {
      const double d = f.derivative(u);
      tr.observe(d, f.eta_tilde, slack * (1.0 + std::abs(d)), "u=" + fmt(u));
    }
    std::mt19937_64 rng(probes.seed);
    std::uniform_real_distribution<double> pick(-probes.u_max, probes.u_max);
    for (int i = 0; i < probes.pair_count; ++i) {
      const double u = pick(rng), v = pick(rng);
      if (u == v) continue;
      const double lhs = (f.value(u) - f.value(v)) * (u - v);
      const double rhs = f.eta_tilde * (u - v) * (u - v);
      const double scale = std::abs(f.value(u) * (u - v)) + std::abs(f.value(v) * (u - v)) + rhs;
      tr.observe(lhs, rhs, slack * (1.0 + scale), "u=" + fmt(u) + " v=" + fmt(v));
    }
    rep.checks.push_back(tr.check);
  }
  {
    Tracker tr("nonlinearity-growth");
    for (double u : us) {
      const double fu = f.value(u) * u;
      const double up = std::pow(std::abs(u), f.p);
      const double scale = slack * (1.0 + std::abs(fu) + (f.c1 + f.c2) * up + f.c0);
      tr.observe(fu, f.c0 - f.c2 * up, scale, "u=" + fmt(u) + " (upper bound)");
      tr.observe(-f.c0 - f.c1 * up, fu, scale, "u=" + fmt(u) + " (lower bound)");
    }
    audit_growth_tail(f, tr);
    rep.checks.push_back(tr.check);
  }
  {
    Tracker tr("potential-consistency");
    for (double u : us) {
      const double h = 1e-4 * std::max(1.0, std::abs(u));
      const double fd = (f.antiderivative(u + h) - f.antiderivative(u - h)) / (2.0 * h);
      const double fu = f.value(u);
      tr.observe(std::abs(fd - fu), 0.0, 1e-6 * (1.0 + std::abs(fu)), "u=" + fmt(u));
    }
    rep.checks.push_back(tr.check);
  }
  rep.potential = derive_potential_constants(f);
  {
    Tracker tr("potential-growth");
    const PotentialConstants& pc = rep.potential;
    if (std::isfinite(pc.c0)) {
      for (double u : us) {
        const double F = f.antiderivative(u);
        const double up = std::pow(std::abs(u), f.p);
        const double scale = slack * (1.0 + std::abs(F) + (pc.c1 + pc.c2) * up + pc.c0);
        tr.observe(F, pc.c0 - pc.c2 * up, scale, "u=" + fmt(u) + " (upper bound)");
        tr.observe(-pc.c0 - pc.c1 * up, F, scale, "u=" + fmt(u) + " (lower bound)");
      }
    }
    rep.checks.push_back(tr.check);
  }

  const DelayKernel& g = spec.delay;
  {
    Tracker tr("delay-zero");
    for (double t : ts)
      for (const auto& tap : g.taps(t))
        if (!std::isfinite(tap.weight)) tr.fail("t=" + fmt(t), tap.weight);
    rep.checks.push_back(tr.check);
  }
  {
    Tracker tr("delay-lipschitz");
    if (!(g.lipschitz() >= 0.0)) tr.fail("C_g=" + fmt(g.lipschitz()), g.lipschitz());
    for (double t : ts) {
      double s = 0.0;
      for (const auto& tap : g.taps(t)) s += std::abs(tap.weight);
      tr.observe(s * s, g.lipschitz(), slack * (1.0 + g.lipschitz()), "t=" + fmt(t));
    }
    rep.checks.push_back(tr.check);
  }
  {
    Tracker tr("delay-lag");
    const double k = g.window();
    if (!(k > 0.0) || !std::isfinite(k)) tr.fail("k=" + fmt(k), k);
    for (double t : ts) {
      for (const auto& tap : g.taps(t)) {
        const double lag = -tap.theta;
        tr.observe(lag, k, slack * k, "t=" + fmt(t));
        if (g.kind() != DelayKernel::Kind::distributed && !(lag > 0.0))
          tr.fail("t=" + fmt(t) + " lag=" + fmt(lag), lag, 0.0);
        if (lag < 0.0) tr.fail("t=" + fmt(t) + " lag=" + fmt(lag), lag, 0.0);
      }
    }
    rep.checks.push_back(tr.check);
  }
  {
    Tracker tr("history-continuity");
    const double k = g.window();
    if (k > 0.0 && std::isfinite(k)) {
      for (double th : linspace(-k, 0.0, 1001)) {
        for (std::size_t j = 0; j < spec.initial_history.modes.size(); ++j) {
          const auto& m = spec.initial_history.modes[j];
          if (!std::isfinite(m.value(th)) || !std::isfinite(m.derivative(th)))
            tr.fail("theta=" + fmt(th) + " mode=" + std::to_string(j + 1));
        }
      }
    }
    rep.checks.push_back(tr.check);
  }
  {
    Tracker tr("forcing-finite");
    const Forcing& h = spec.forcing;
    if (h.tail_amplitude != 0.0 && !(h.tail_exponent < 0.5))
      tr.fail("tail exponent " + fmt(h.tail_exponent) + " leaves H^-1", h.tail_exponent, 0.5);
    const int n = spec.domain.mode_count;
    for (double t : ts)
      for (int j = 1; j <= n; ++j)
        if (!std::isfinite(h.coefficient(j, t)))
          tr.fail("t=" + fmt(t) + " mode=" + std::to_string(j));
    rep.checks.push_back(tr.check);
  }
  return rep;
}

AuditReport require_admissible(const ProblemSpec& spec, const ProbeGrid& probes) {
  spec.domain.validate();
  AuditReport rep = audit(spec, probes);
  for (const auto& c : rep.checks)
    if (!c.passed) throw HypothesisViolation(c.name, c.witness);
  return rep;
}

}  // namespace pblab
