#include "pblab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pblab/attractor.hpp"
#include "pblab/csv.hpp"
#include "pblab/energy.hpp"
#include "pblab/errors.hpp"
#include "pblab/oracle.hpp"
#include "pblab/problem.hpp"
#include "pblab/scenario.hpp"
#include "pblab/solver.hpp"

namespace pblab::cli {

namespace {

using nlohmann::json;

struct Common {
  std::string uri;
  double tau = 0.0;
  double t_end = 0.0;
  double dt = 0.0;
  double eta = 0.0;
  int record_every = 1;
  std::string out;
  bool print_config = false;
  CLI::Option* tau_opt = nullptr;
  CLI::Option* t_end_opt = nullptr;
  CLI::Option* dt_opt = nullptr;
  CLI::Option* eta_opt = nullptr;
  CLI::Option* record_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c, bool with_t_end = true) {
  sub->add_option("scenario", c.uri, "default:<name> or a scenario JSON file")->required();
  c.tau_opt = sub->add_option("--tau", c.tau, "initial time (scenario value by default)");
  if (with_t_end)
    c.t_end_opt = sub->add_option("--t-end", c.t_end, "final time (scenario value by default)");
  c.dt_opt = sub->add_option("--dt", c.dt, "time step (scenario value by default)");
  c.eta_opt = sub->add_option("--eta", c.eta, "bound exponent eta (default 0.9 eta_max)");
  c.record_opt = sub->add_option("--record-every", c.record_every, "record every n-th step");
  sub->add_option("--out", c.out, "CSV destination (stdout when omitted)");
  sub->add_flag("--print-config", c.print_config, "print the resolved configuration and exit");
}

Scenario resolve(const Common& c) {
  Scenario s = load_scenario(c.uri);
  if (c.tau_opt != nullptr && c.tau_opt->count() > 0) s.tau = c.tau;
  if (c.t_end_opt != nullptr && c.t_end_opt->count() > 0) s.t_end = c.t_end;
  if (c.dt_opt->count() > 0) s.solver.dt = c.dt;
  if (c.eta_opt->count() > 0) s.eta = c.eta;
  if (c.record_opt->count() > 0) s.solver.record_every = c.record_every;
  return s;
}

// Writes through `sink` into --out when given, else into `out`.
void emit(const Common& c, std::ostream& out, const std::function<void(std::ostream&)>& sink) {
  if (c.out.empty() || c.out == "-") {
    sink(out);
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ConfigError("cannot write '" + c.out + "'");
  sink(f);
}

// Summary lines go to stdout when the CSV went to a file, else to stderr.
std::ostream& summary(const Common& c, std::ostream& out, std::ostream& err) {
  return c.out.empty() || c.out == "-" ? err : out;
}

json config_json(const Scenario& s, const std::string& command, const json& settings) {
  json j;
  j["command"] = command;
  j["scenario"] = json::parse(scenario_to_json(s));
  j["settings"] = settings;
  return j;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell.erase(std::remove_if(cell.begin(), cell.end(), ::isspace), cell.end());
    if (!cell.empty()) out.push_back(csv::parse(cell));
  }
  return out;
}

bool is_closed_form_case(const ProblemSpec& p) {
  return p.domain.mode_count == 1 && p.epsilon.kind() == TimeProfile::Kind::constant &&
         p.diffusion.kind() == DiffusionLaw::Kind::constant && p.nonlinearity.is_zero() &&
         p.delay.is_zero() && p.forcing.is_zero() && p.initial_history.modes.size() == 1 &&
         p.initial_history.modes[0].slope == 0.0 && p.initial_history.modes[0].amplitude == 0.0 &&
         p.initial_history.modes[0].exp_coefficient == 0.0;
}

}  // namespace

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator and estimate monitors for a delayed nonlocal pseudo-parabolic problem",
               "pullback_lab"};
  app.require_subcommand(1);
  std::function<int()> action;

  // audit
  Common audit_c;
  ProbeGrid probes;
  auto* audit_cmd = app.add_subcommand("audit", "check the structural hypotheses");
  audit_cmd->add_option("scenario", audit_c.uri, "default:<name> or a scenario JSON file")
      ->required();
  audit_cmd->add_option("--t-min", probes.t_min, "first time probe")->capture_default_str();
  audit_cmd->add_option("--t-max", probes.t_max, "last time probe")->capture_default_str();
  audit_cmd->add_option("--u-max", probes.u_max, "reaction probe range")->capture_default_str();
  audit_cmd->add_option("--s-max", probes.s_max, "diffusion probe range")->capture_default_str();
  audit_cmd->add_option("--pairs", probes.pair_count, "random Lipschitz pairs")
      ->capture_default_str();
  audit_cmd->add_option("--seed", probes.seed, "probe seed")->capture_default_str();
  audit_cmd->add_option("--limit-tolerance", probes.limit_tolerance, "eps(t) -> 1 tolerance")
      ->capture_default_str();
  audit_cmd->add_flag("--print-config", audit_c.print_config, "print the configuration and exit");
  audit_cmd->callback([&] {
    action = [&]() -> int {
      const Scenario s = load_scenario(audit_c.uri);
      if (audit_c.print_config) {
        out << config_json(s, "audit",
                           {{"t_min", probes.t_min},
                            {"t_max", probes.t_max},
                            {"t_count", probes.t_count},
                            {"u_max", probes.u_max},
                            {"s_max", probes.s_max},
                            {"pairs", probes.pair_count},
                            {"seed", probes.seed},
                            {"limit_tolerance", probes.limit_tolerance},
                            {"relative_slack", probes.relative_slack}})
                   .dump(2)
            << '\n';
        return ok;
      }
      const AuditReport rep = audit(s.spec, probes);
      for (const HypothesisCheck& c : rep.checks)
        out << (c.passed ? "pass " : "FAIL ") << c.name << "  worst=" << csv::format(c.worst)
            << " limit=" << csv::format(c.limit) << (c.witness.empty() ? "" : "  at ")
            << c.witness << '\n';
      if (!rep.passed()) {
        for (const std::string& name : rep.failures())
          err << "hypothesis violated: " << name << '\n';
        return hypothesis;
      }
      return ok;
    };
  });

  // simulate
  Common sim;
  std::string coef_out;
  auto* sim_cmd = app.add_subcommand("simulate", "integrate and write the trajectory CSV");
  add_common(sim_cmd, sim);
  sim_cmd->add_option("--coefficients-out", coef_out, "also write the t,j,coef long form");
  sim_cmd->callback([&] {
    action = [&]() -> int {
      const Scenario s = resolve(sim);
      if (sim.print_config) {
        out << config_json(s, "simulate", json::object()).dump(2) << '\n';
        return ok;
      }
      require_admissible(s.spec);
      const TrajectoryRecord rec = integrate(s.spec, s.solver, s.tau, s.t_end);
      emit(sim, out, [&](std::ostream& o) { csv::write_trajectory(o, rec); });
      if (!coef_out.empty()) {
        std::ofstream f(coef_out);
        if (!f) throw ConfigError("cannot write '" + coef_out + "'");
        csv::write_coefficients(f, rec);
      }
      return ok;
    };
  });

  // verify-energy
  Common ve;
  int halvings = 1;
  double max_residual = 1e-7, min_ratio = 8.0;
  auto* ve_cmd = app.add_subcommand("verify-energy", "energy-equality residual under halving");
  add_common(ve_cmd, ve);
  ve_cmd->add_option("--halvings", halvings, "runs at dt 2^h, ..., dt")->capture_default_str();
  ve_cmd->add_option("--max-residual", max_residual, "bound on max |R| at the finest step")
      ->capture_default_str();
  ve_cmd->add_option("--min-ratio", min_ratio, "required residual ratio per halving")
      ->capture_default_str();
  ve_cmd->callback([&] {
    action = [&]() -> int {
      const Scenario s = resolve(ve);
      if (ve.print_config) {
        out << config_json(s, "verify-energy",
                           {{"halvings", halvings},
                            {"max_residual", max_residual},
                            {"min_ratio", min_ratio}})
                   .dump(2)
            << '\n';
        return ok;
      }
      require_admissible(s.spec);
      std::vector<double> dts, res;
      for (int h = halvings; h >= 0; --h) {
        SolverConfig c = s.solver;
        c.dt = s.solver.dt * std::ldexp(1.0, h);
        dts.push_back(c.dt);
        res.push_back(integrate(s.spec, c, s.tau, s.t_end).max_abs_energy_residual());
      }
      bool pass = res.back() <= max_residual;
      emit(ve, out, [&](std::ostream& o) {
        o << "dt,max_abs_residual,ratio\n";
        for (std::size_t i = 0; i < dts.size(); ++i) {
          const double ratio = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                      : res[i - 1] / res[i];
          if (i > 0 && !(ratio >= min_ratio) && res[i - 1] > 0.0) pass = false;
          o << csv::format(dts[i]) << ',' << csv::format(res[i]) << ',' << csv::format(ratio)
            << '\n';
        }
      });
      summary(ve, out, err) << (pass ? "energy residual ok" : "energy residual check failed")
                            << '\n';
      return pass ? ok : bound;
    };
  });

  // verify-bound
  Common vb;
  double slack_tol = 1e-9;
  auto* vb_cmd = app.add_subcommand("verify-bound", "pullback energy bound monitor");
  add_common(vb_cmd, vb);
  vb_cmd->add_option("--slack", slack_tol, "allowed relative violation")->capture_default_str();
  vb_cmd->callback([&] {
    action = [&]() -> int {
      const Scenario s = resolve(vb);
      if (vb.print_config) {
        out << config_json(s, "verify-bound", {{"slack", slack_tol}}).dump(2) << '\n';
        return ok;
      }
      require_admissible(s.spec);
      const BoundConstants consts = derive_constants(s.spec, s.eta);
      const TrajectoryRecord rec = integrate(s.spec, s.solver, s.tau, s.t_end);
      const std::vector<BoundRow> rows = bound_report(rec, consts, s.spec);
      emit(vb, out, [&](std::ostream& o) { csv::write_bound(o, rows); });
      const double worst = worst_relative_slack(rows);
      summary(vb, out, err) << "eta=" << csv::format(consts.eta)
                            << " eta1=" << csv::format(consts.eta1)
                            << " worst_relative_slack=" << csv::format(worst) << '\n';
      return worst >= -slack_tol ? ok : bound;
    };
  });

  // absorb
  Common ab;
  std::string ab_taus;
  double ab_scale = 100.0;
  int ab_samples = 1;
  std::uint64_t ab_seed = 20240917;
  auto* ab_cmd = app.add_subcommand("absorb", "absorbing-ball entry times against T*");
  add_common(ab_cmd, ab, false);
  ab_cmd->add_option("--taus", ab_taus, "comma-separated initial times (default: scenario tau)");
  ab_cmd->add_option("--scale", ab_scale, "C_Ht^2 of the data as a multiple of rho^2(tau)")
      ->capture_default_str();
  ab_cmd->add_option("--samples", ab_samples, "histories per tau")->capture_default_str();
  ab_cmd->add_option("--seed", ab_seed, "sampling seed")->capture_default_str();
  ab_cmd->callback([&] {
    action = [&]() -> int {
      Scenario s = resolve(ab);
      // large data makes the cubic term stiff; default to a finer step
      if (ab.dt_opt->count() == 0) s.solver.dt = std::min(s.solver.dt, 2.5e-4);
      std::vector<double> taus = ab_taus.empty() ? std::vector<double>{s.tau} : parse_list(ab_taus);
      if (ab.print_config) {
        out << config_json(s, "absorb",
                           {{"taus", taus},
                            {"scale", ab_scale},
                            {"samples", ab_samples},
                            {"seed", ab_seed}})
                   .dump(2)
            << '\n';
        return ok;
      }
      require_admissible(s.spec);
      const BoundConstants consts = derive_constants(s.spec, s.eta);
      const EigenData eig = eigenvalues(s.spec.domain);
      const ScalarFn h = [&](double r) { return forcing_hminus1_sq(s.spec.forcing, eig, r); };
      std::vector<AbsorptionReport> reps;
      std::vector<int> ids;
      for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        const double rho = absorbing_radius(consts, taus[ti], h);
        for (int si = 0; si < ab_samples; ++si) {
          const InitialHistory phi = sample_history(s.spec, s.solver, taus[ti], ab_scale * rho,
                                                    ab_seed, static_cast<int>(ti), si);
          reps.push_back(absorption_entry(s.spec, s.solver, taus[ti], phi, s.eta));
          ids.push_back(si);
        }
      }
      bool pass = true;
      emit(ab, out, [&](std::ostream& o) {
        o << "tau,sample_id,phi_C_Ht_sq,entry_time,T_star,entered\n";
        for (std::size_t i = 0; i < reps.size(); ++i) {
          pass = pass && reps[i].within_bound;
          o << csv::format(reps[i].tau) << ',' << ids[i] << ','
            << csv::format(reps[i].phi_c_ht_sq) << ',' << csv::format(reps[i].entry_time) << ','
            << csv::format(reps[i].entry_bound) << ',' << (reps[i].within_bound ? 1 : 0) << '\n';
        }
      });
      summary(ab, out, err) << (pass ? "all entries within T*" : "entry after T* or none")
                            << '\n';
      return pass ? ok : bound;
    };
  });

  // pullback
  Common pb;
  std::string pb_taus;
  double pb_t = 0.0, pb_tau_far = 0.0, pb_slack = 1e-6;
  int pb_samples = 8, pb_far_samples = 8;
  std::uint64_t pb_seed = 20240917;
  CLI::Option* pb_t_opt = nullptr;
  CLI::Option* pb_far_opt = nullptr;
  auto* pb_cmd = app.add_subcommand("pullback", "ensemble from receding taus and semidistances");
  add_common(pb_cmd, pb, false);
  pb_t_opt = pb_cmd->add_option("--t", pb_t, "target time (default: scenario t_end)");
  pb_cmd->add_option("--taus", pb_taus, "comma-separated decreasing taus (default t-5,t-10,t-20)");
  pb_far_opt = pb_cmd->add_option("--tau-far", pb_tau_far, "attractor tau (default t-40)");
  pb_cmd->add_option("--samples", pb_samples, "histories per tau")->capture_default_str();
  pb_cmd->add_option("--attractor-samples", pb_far_samples, "histories at tau-far")
      ->capture_default_str();
  pb_cmd->add_option("--seed", pb_seed, "sampling seed")->capture_default_str();
  pb_cmd->add_option("--monotone-slack", pb_slack, "allowed semidistance increase")
      ->capture_default_str();
  pb_cmd->callback([&] {
    action = [&]() -> int {
      const Scenario s = resolve(pb);
      const double t = pb_t_opt->count() > 0 ? pb_t : s.t_end;
      const std::vector<double> taus =
          pb_taus.empty() ? std::vector<double>{t - 5, t - 10, t - 20} : parse_list(pb_taus);
      const double far = pb_far_opt->count() > 0 ? pb_tau_far : t - 40;
      if (pb.print_config) {
        out << config_json(s, "pullback",
                           {{"t", t},
                            {"taus", taus},
                            {"tau_far", far},
                            {"samples", pb_samples},
                            {"attractor_samples", pb_far_samples},
                            {"seed", pb_seed},
                            {"monotone_slack", pb_slack}})
                   .dump(2)
            << '\n';
        return ok;
      }
      require_admissible(s.spec);
      EnsembleOptions opts;
      opts.eta = s.eta;
      const EnsembleRun run = pullback_ensemble(s.spec, s.solver, t, taus, pb_samples, pb_seed, opts);
      const std::vector<HistorySegment> attractor =
          attractor_approximation(s.spec, s.solver, t, far, pb_far_samples, pb_seed + 1, opts);
      const EigenData eig = eigenvalues(s.spec.domain);
      emit(pb, out, [&](std::ostream& o) { csv::write_ensemble(o, run); });
      std::ostream& sum = summary(pb, out, err);
      sum << "tau,semidistance_C_Ht\n";
      bool pass = true;
      double prev = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < taus.size(); ++i) {
        const double d = semidistance(run.endpoints(static_cast<int>(i)), attractor,
                                      SegmentNorm::c_ht, eig, s.spec.epsilon,
                                      s.solver.eps_weight);
        if (d > prev + pb_slack) pass = false;
        prev = d;
        sum << csv::format(taus[i]) << ',' << csv::format(d) << '\n';
      }
      sum << (pass ? "semidistance nonincreasing" : "semidistance increased") << '\n';
      return pass ? ok : bound;
    };
  });

  // regularity
  Common rg;
  double rg_theta = 0.0, rg_slack = 1e-9, rg_super = 1e-8;
  CLI::Option* theta_opt = nullptr;
  auto* rg_cmd = app.add_subcommand("regularity", "decomposition u = v + v1 and its bounds");
  add_common(rg_cmd, rg);
  theta_opt = rg_cmd->add_option("--theta", rg_theta, "forcing split tolerance");
  rg_cmd->add_option("--slack", rg_slack, "allowed relative bound violation")
      ->capture_default_str();
  rg_cmd->add_option("--superposition-tolerance", rg_super, "bound on ||v + v1 - u|| / max ||u||")
      ->capture_default_str();
  rg_cmd->callback([&] {
    action = [&]() -> int {
      const Scenario s = resolve(rg);
      RegularityOptions opts;
      opts.eta = s.eta;
      if (theta_opt->count() > 0) opts.theta = rg_theta;
      if (rg.print_config) {
        json settings = {{"slack", rg_slack},
                         {"superposition_tolerance", rg_super},
                         {"rho2_fraction", opts.rho2_fraction}};
        if (opts.theta) settings["theta"] = *opts.theta;
        out << config_json(s, "regularity", settings).dump(2) << '\n';
        return ok;
      }
      require_admissible(s.spec);
      const RegularityReport rep =
          solve_decomposed(s.spec, s.solver, s.tau, s.t_end, s.spec.initial_history, opts);
      emit(rg, out, [&](std::ostream& o) { csv::write_regularity(o, rep); });
      bool pass = rep.max_superposition_err < rg_super;
      for (const RegularityRow& r : rep.rows) {
        pass = pass && r.i1 <= r.i1_bound + rg_slack * (1.0 + r.i1_bound);
        pass = pass && r.i2 <= r.i2_bound + rg_slack * (1.0 + r.i2_bound);
      }
      summary(rg, out, err) << "theta=" << csv::format(rep.theta)
                            << " kept_modes=" << rep.split.kept_modes
                            << " rho1=" << csv::format(rep.rho1) << " rho2=" << csv::format(rep.rho2)
                            << " R1=" << csv::format(rep.r1) << " R2=" << csv::format(rep.r2)
                            << " superposition=" << csv::format(rep.max_superposition_err) << '\n';
      return pass ? ok : bound;
    };
  });

  // oracle
  Common oc;
  int fd_points = 256;
  double fd_tol = 1e-4, cf_tol = 1e-6;
  auto* oc_cmd = app.add_subcommand("oracle", "closed-form and finite-difference cross-checks");
  add_common(oc_cmd, oc);
  oc_cmd->add_option("--fd-points", fd_points, "finite-difference interior points")
      ->capture_default_str();
  oc_cmd->add_option("--fd-tolerance", fd_tol, "bound on the spectral/FD endpoint L2 distance")
      ->capture_default_str();
  oc_cmd->add_option("--closed-form-tolerance", cf_tol, "relative closed-form error bound")
      ->capture_default_str();
  oc_cmd->callback([&] {
    action = [&]() -> int {
      const Scenario s = resolve(oc);
      if (oc.print_config) {
        out << config_json(s, "oracle",
                           {{"fd_points", fd_points},
                            {"fd_tolerance", fd_tol},
                            {"closed_form_tolerance", cf_tol}})
                   .dump(2)
            << '\n';
        return ok;
      }
      require_admissible(s.spec);
      const TrajectoryRecord spec_rec = integrate(s.spec, s.solver, s.tau, s.t_end);
      const TrajectoryRecord fd_rec =
          oracle::finite_difference_reference(s.spec, s.solver, s.tau, s.t_end, fd_points);
      bool pass = true;
      emit(oc, out, [&](std::ostream& o) {
        o << "check,value,tolerance,pass\n";
        if (is_closed_form_case(s.spec)) {
          const EigenData eig = eigenvalues(s.spec.domain);
          const double exact = oracle::single_mode_closed_form(
              s.spec.diffusion.value(0.0), s.spec.epsilon.value(s.tau), eig.lambda1(),
              s.spec.initial_history.modes[0].constant, s.tau, s.t_end);
          const double got = spec_rec.final_row().state[0];
          const double rel = std::abs(got - exact) / std::max(std::abs(exact), 1e-300);
          const bool p = rel < cf_tol;
          pass = pass && p;
          o << "closed_form_relative_error," << csv::format(rel) << ',' << csv::format(cf_tol)
            << ',' << (p ? 1 : 0) << '\n';
        }
        const double d = oracle::grid_l2_distance(spec_rec.final_row().state,
                                                  fd_rec.final_row().state, s.spec.domain.length);
        const bool p = d < fd_tol;
        pass = pass && p;
        o << "spectral_fd_l2_distance," << csv::format(d) << ',' << csv::format(fd_tol) << ','
          << (p ? 1 : 0) << '\n';
      });
      return pass ? ok : bound;
    };
  });

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return usage;
  }
  if (!action) return usage;
  try {
    return action();
  } catch (const HypothesisViolation& e) {
    err << e.what() << '\n';
    return hypothesis;
  } catch (const DelayTooStrong& e) {
    err << e.what() << '\n';
    return hypothesis;
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return usage;
  } catch (const UnknownScenario& e) {
    err << e.what() << '\n';
    return usage;
  } catch (const GridTooCoarse& e) {
    err << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return failure;
  }
}

}  // namespace pblab::cli
