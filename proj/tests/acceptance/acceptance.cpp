// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference values come from closed forms or from arithmetic done
// here, never from the code under test.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pblab/attractor.hpp"
#include "pblab/energy.hpp"
#include "pblab/errors.hpp"
#include "pblab/oracle.hpp"
#include "pblab/scenario.hpp"
#include "pblab/solver.hpp"

using namespace pblab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// 1: closed form and order
Outcome closed_form() {
  const Scenario s = default_scenario("linear-single-mode");
  const double lambda1 = 1.0, a0 = 3.0, eps0 = 1.0, c = 1.0;
  auto rel_err = [&](double dt) {
    SolverConfig cfg = s.solver;
    cfg.dt = dt;
    const double got = integrate(s.spec, cfg, 0.0, 1.0).final_row().state[0];
    const double exact = oracle::single_mode_closed_form(a0, eps0, lambda1, c, 0.0, 1.0);
    return std::abs(got - exact) / exact;
  };
  const double e4 = rel_err(4e-3), e2 = rel_err(2e-3), e1 = rel_err(1e-3);
  const double r1 = e4 / e2, r2 = e2 / e1;
  Outcome o;
  o.pass = e1 < 1e-6 && r1 >= 12.0 && r2 >= 12.0;
  o.detail = "rel err at 1e-3 = " + fmt(e1) + ", ratios " + fmt(r1) + ", " + fmt(r2);
  return o;
}

// 2: energy equality residual
Outcome energy_equality() {
  const Scenario s = default_scenario("cubic-delayed");
  auto residual = [&](double dt) {
    SolverConfig cfg = s.solver;
    cfg.dt = dt;
    return integrate(s.spec, cfg, 0.0, 2.0).max_abs_energy_residual();
  };
  const double coarse = residual(2e-3), fine = residual(1e-3);
  Outcome o;
  o.pass = fine < 1e-7 && coarse / fine >= 8.0;
  o.detail = "max|R| " + fmt(coarse) + " -> " + fmt(fine) + ", ratio " + fmt(coarse / fine);
  return o;
}

// 3: pullback energy bound on random admissible scenarios
Outcome bound_monitor() {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0, audited = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 20; ++trial) {
    Scenario s = default_scenario("cubic-delayed");
    const double alpha = 0.5 * u(rng);
    const bool decreasing = trial % 2 == 0;
    const double center = 4.0 * u(rng) - 2.0, width = 1.0 + u(rng);
    const TimeProfile raw = decreasing ? TimeProfile::decreasing_tanh(alpha, 10.0, center, width)
                                       : TimeProfile::increasing_tanh(alpha, 10.0, center, width);
    // L just above sup |eps| + |eps'| on a fine grid
    double sup = 0.0;
    for (int i = 0; i <= 40000; ++i) {
      const double t = -20.0 + 1e-3 * i;
      sup = std::max(sup, std::abs(raw.value(t)) + std::abs(raw.derivative(t)));
    }
    s.spec.epsilon = raw.with_bound(sup + 0.05);
    // C_g strictly inside the region where the default eta gives eta1 > 0
    const double L = s.spec.epsilon.bound(), k = 1.0, lambda1 = 1.0;
    const double eta = 0.9 * (1 + L) * lambda1 / (1 + lambda1 * L);
    const double cg_max = eta * (1 + lambda1 * L) * std::exp(-eta * k);
    const double cg = 0.95 * cg_max * u(rng);
    const double gain = (u(rng) < 0.5 ? -1.0 : 1.0) * std::sqrt(cg) * (0.5 + 0.5 * u(rng));
    s.spec.delay = DelayKernel::discrete(k, 0.25 + 0.75 * u(rng), gain, cg);
    s.spec.forcing.modes[0].base = 2.0 * u(rng);
    s.spec.forcing.modes[1].amplitude = u(rng);
    const double scale = 20.0 * u(rng);
    s.spec.initial_history = sample_history(s.spec, s.solver, 0.0, scale, 77, 0, trial);
    if (!audit(s.spec).passed()) {
      ++violations;
      continue;
    }
    ++audited;
    const BoundConstants c = derive_constants(s.spec);
    const TrajectoryRecord rec = integrate(s.spec, s.solver, 0.0, 2.0);
    for (const BoundRow& r : bound_report(rec, c, s.spec)) {
      const double rel = (r.rhs - r.lhs) / (1.0 + r.rhs);
      worst = std::min(worst, rel);
      if (r.rhs - r.lhs < -1e-9 * (1.0 + r.rhs)) ++violations;
    }
  }
  Outcome o;
  o.pass = violations == 0 && audited == 20;
  o.detail = std::to_string(audited) + " scenarios, " + std::to_string(violations) +
             " violations, worst relative slack " + fmt(worst);
  return o;
}

// 4: coef_c = 2
Outcome coef_identity() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  double worst = 0.0;
  while (tested < 100) {
    ConstantInputs in;
    in.lambda1 = 0.1 + 10.0 * u(rng);
    in.bound_l = 1.0 + 3.0 * u(rng);
    in.window = 0.05 + 3.0 * u(rng);
    in.c_g = 1e-4 + u(rng);
    in.c0 = u(rng);
    in.measure = 0.5 + 5.0 * u(rng);
    const double eta_max = (1 + in.bound_l) * in.lambda1 / (1 + in.lambda1 * in.bound_l);
    const double eta = eta_max * (0.01 + 0.98 * u(rng));
    if (eta - in.c_g * std::exp(eta * in.window) / (1 + in.lambda1 * in.bound_l) <= 0) continue;
    const BoundConstants c = derive_constants(in, eta);
    worst = std::max(worst, std::abs(c.coef_c - 2.0) / 2.0);
    ++tested;
  }
  Outcome o;
  o.pass = worst <= 1e-12;
  o.detail = "100 tuples, worst relative deviation " + fmt(worst);
  return o;
}

// 5: absorbing-ball entry time
Outcome absorbing_entry() {
  Scenario s = default_scenario("cubic-delayed");
  s.solver.dt = 2.5e-4;
  s.solver.record_every = 1;
  const BoundConstants c = derive_constants(s.spec);
  const EigenData eig = eigenvalues(s.spec.domain);
  const ScalarFn h = [&](double r) { return forcing_hminus1_sq(s.spec.forcing, eig, r); };
  const double tau = 0.0;
  const double rho_tau = absorbing_radius(c, tau, h);
  bool pass = true;
  std::string detail;
  for (int seed = 1; seed <= 5; ++seed) {
    ProblemSpec p = s.spec;
    p.initial_history = sample_history(p, s.solver, tau, 100.0 * rho_tau, seed, 0, 0);
    const double phi = history_norm_sq(p, s.solver, tau, p.initial_history);
    const double delta = c.margin;
    const double t_star = std::log(c.coef_a * phi / delta) / c.eta1;
    const long steps = static_cast<long>(std::ceil(t_star / s.solver.dt));
    const TrajectoryRecord rec = integrate(p, s.solver, tau, tau + steps * s.solver.dt);
    const std::vector<double> rho =
        absorbing_radius_series(c, tau, s.solver.dt, rec.rows.size(), h);
    double entry = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < rec.rows.size(); ++i)
      if (rec.rows[i].window.c_ht_sq <= rho[i]) {
        entry = rec.rows[i].t - tau;
        break;
      }
    const bool ok = std::isfinite(entry) && entry <= t_star;
    pass = pass && ok;
    detail += (seed > 1 ? "; " : "") + std::string("seed ") + std::to_string(seed) + " entry " +
              fmt(entry) + " <= T* " + fmt(t_star);
  }
  return {pass, detail};
}

// 6: contraction inequality
Outcome contraction() {
  Scenario s = default_scenario("cubic-delayed");
  s.solver.record_every = 1;
  const BoundConstants c = derive_constants(s.spec);
  const EigenData eig = eigenvalues(s.spec.domain);
  const ScalarFn h = [&](double r) { return forcing_hminus1_sq(s.spec.forcing, eig, r); };
  const double tau = 0.0, t = 3.0;
  const double rho = absorbing_radius(c, tau, h);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int pair = 0; pair < 10; ++pair) {
    ProblemSpec p1 = s.spec, p2 = s.spec;
    p1.initial_history = sample_history(p1, s.solver, tau, rho * u(rng), 66, pair, 0);
    p2.initial_history = sample_history(p2, s.solver, tau, rho * u(rng), 66, pair, 1);
    const TrajectoryRecord a = integrate(p1, s.solver, tau, t);
    const TrajectoryRecord b = integrate(p2, s.solver, tau, t);
    for (const ContractionRow& r : contraction_report(a, b, c, s.spec)) {
      worst = std::min(worst, (r.rhs - r.lhs) / (1.0 + r.rhs));
      if (r.rhs - r.lhs < -1e-9 * (1.0 + r.rhs)) ++violations;
    }
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = "10 pairs, " + std::to_string(violations) + " violations, worst relative slack " +
             fmt(worst);
  return o;
}

// 7: pullback attraction on the linear mode
Outcome pullback() {
  const Scenario s = default_scenario("linear-single-mode");
  const double t = 0.0;
  const std::vector<double> taus{t - 5, t - 10, t - 20};
  const EnsembleRun run = pullback_ensemble(s.spec, s.solver, t, taus, 8, 7);
  const std::vector<HistorySegment> far =
      attractor_approximation(s.spec, s.solver, t, t - 40, 8, 8);
  const EigenData eig = eigenvalues(s.spec.domain);
  std::vector<double> d;
  for (int i = 0; i < 3; ++i)
    d.push_back(semidistance(run.endpoints(i), far, SegmentNorm::c_ht, eig, s.spec.epsilon));
  const bool monotone = d[1] <= d[0] + 1e-6 && d[2] <= d[1] + 1e-6;
  // the section is {0}: the endpoints' own norms must vanish as well
  double to_zero = 0.0;
  for (const HistorySegment& e : run.endpoints(2))
    to_zero = std::max(to_zero, sup_norm(e, SegmentNorm::c_ht, eig, s.spec.epsilon));
  Outcome o;
  o.pass = monotone && d[2] < 1e-3 && to_zero < 1e-3;
  o.detail = "semidistances " + fmt(d[0]) + ", " + fmt(d[1]) + ", " + fmt(d[2]) +
             "; max norm at t-20 " + fmt(to_zero);
  return o;
}

// 8: regularity decomposition
Outcome regularity() {
  const Scenario s = default_scenario("cubic-delayed");
  const RegularityReport r =
      solve_decomposed(s.spec, s.solver, s.tau, s.t_end, s.spec.initial_history);
  int i1_bad = 0, i2_bad = 0;
  for (const RegularityRow& row : r.rows) {
    if (row.i1 > row.i1_bound + 1e-9 * (1.0 + row.i1_bound)) ++i1_bad;
    if (row.i2 > row.i2_bound + 1e-9 * (1.0 + row.i2_bound)) ++i2_bad;
  }
  const double t = s.t_end, tau_far = t - 40.0;
  const std::vector<HistorySegment> cloud =
      attractor_approximation(s.spec, s.solver, t, tau_far, 8, 88);
  const double r2 = regularity_radius(s.spec, s.solver, tau_far, t);
  const EigenData eig = eigenvalues(s.spec.domain);
  double worst = 0.0;
  for (const HistorySegment& e : cloud)
    worst = std::max(worst, sup_norm_sq(e, SegmentNorm::c_ht1, eig, s.spec.epsilon));
  Outcome o;
  o.pass = r.max_superposition_err < 1e-8 && i1_bad == 0 && i2_bad == 0 && worst <= r2;
  o.detail = "superposition " + fmt(r.max_superposition_err) + ", I1 violations " +
             std::to_string(i1_bad) + ", I2 violations " + std::to_string(i2_bad) +
             ", cloud C_H1^2 " + fmt(worst) + " <= R2 " + fmt(r2);
  return o;
}

// 9: spectral against finite differences
Outcome cross_discretization() {
  Scenario s = default_scenario("cubic-delayed");
  auto distance = [&](int modes, int points) {
    Scenario q = s;
    q.spec.domain.mode_count = modes;
    q.solver.grid_size = 0;
    const TrajectoryRecord sp = integrate(q.spec, q.solver, 0.0, 1.0);
    const TrajectoryRecord fd =
        oracle::finite_difference_reference(q.spec, q.solver, 0.0, 1.0, points);
    return oracle::grid_l2_distance(sp.final_row().state, fd.final_row().state,
                                    q.spec.domain.length);
  };
  const double d1 = distance(16, 256), d2 = distance(32, 512);
  Outcome o;
  o.pass = d1 < 1e-4 && d2 < d1;
  o.detail = "L2 distance " + fmt(d1) + " (N=16, M=256) -> " + fmt(d2) + " (N=32, M=512)";
  return o;
}

// 10: audit mutation fixtures
Outcome mutations() {
  const ProblemSpec base = default_scenario("cubic-delayed").spec;
  auto violation = [&](const ProblemSpec& p) -> std::string {
    try {
      require_admissible(p);
    } catch (const HypothesisViolation& e) {
      return e.name();
    }
    return "none";
  };
  ProblemSpec low_m = base;
  low_m.diffusion = DiffusionLaw::rational(1.9, 4.0, 1.0);
  const std::string m_name = violation(low_m);

  ProblemSpec bad_f = base;
  bad_f.nonlinearity.c2 = 2.0;  // F = u^2/2 - u^4/4 cannot sit below C0 - 2|u|^4
  const std::string f_name = violation(bad_f);

  // raise C_g until the best eta1 over (0, eta_max) is nonpositive
  bool delay_ok = false;
  double cg = 0.25, reported = 0.0;
  for (int i = 0; i < 60 && !delay_ok; ++i) {
    ProblemSpec p = base;
    p.delay = DelayKernel::discrete(1.0, 1.0, std::sqrt(cg), cg);
    if (!audit(p).passed()) break;
    try {
      derive_constants(p);
    } catch (const DelayTooStrong& e) {
      reported = e.best_eta1();
      // independent check: eta - C_g e^{eta} / 2 <= 0 on a fine eta grid
      bool all_nonpositive = true;
      for (int j = 1; j < 10000; ++j) {
        const double eta = j / 10000.0;
        if (eta - cg * std::exp(eta) / 2.0 > 0.0) all_nonpositive = false;
      }
      delay_ok = all_nonpositive && reported <= 0.0;
    }
    cg *= 1.1;
  }
  Outcome o;
  o.pass = m_name == "diffusion-coercivity" && f_name == "nonlinearity-growth" && delay_ok;
  o.detail = "m lowered -> " + m_name + "; f mutated -> " + f_name + "; C_g raised -> " +
             (delay_ok ? "DelayTooStrong at C_g " + fmt(cg / 1.1) : std::string("no error"));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"closed-form accuracy and order", closed_form},
      {"energy equality residual", energy_equality},
      {"pullback energy bound monitor", bound_monitor},
      {"coef_c identity", coef_identity},
      {"absorbing-ball entry", absorbing_entry},
      {"contraction inequality", contraction},
      {"pullback attraction", pullback},
      {"regularity decomposition", regularity},
      {"cross-discretization", cross_discretization},
      {"audit mutation fixtures", mutations},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
