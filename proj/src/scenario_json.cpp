#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pblab/errors.hpp"
#include "pblab/scenario.hpp"

namespace pblab {

namespace {

using nlohmann::json;

// Rejects keys outside `allowed` so typos fail loudly.
void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

double num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string(key) + ": expected a number");
  return v.get<double>();
}

int integer(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string(key) + ": expected an integer");
  return v.get<int>();
}

std::string str(const json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string(key) + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(std::string(key) + ": expected an array");
  for (const json& x : v) {
    if (!x.is_number()) throw ConfigError(std::string(key) + ": expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

DomainSpec read_domain(const json& j) {
  check_keys(j, "domain", {"length", "modes"});
  DomainSpec d;
  d.length = num(j, "length", d.length);
  d.mode_count = integer(j, "modes", d.mode_count);
  return d;
}

TimeProfile read_epsilon(const json& j) {
  check_keys(j, "epsilon",
             {"kind", "value", "amplitude", "bound", "center", "width", "eps_min", "samples"});
  const std::string kind = str(j, "kind", "constant");
  const double bound = num(j, "bound", 1.0);
  TimeProfile e;
  if (kind == "constant") {
    e = TimeProfile::constant(num(j, "value", 1.0), bound);
  } else if (kind == "decreasing_tanh" || kind == "increasing_tanh") {
    const double amp = num(j, "amplitude", 0.5);
    const double center = num(j, "center", 0.0);
    const double width = num(j, "width", 1.0);
    e = kind == "decreasing_tanh" ? TimeProfile::decreasing_tanh(amp, bound, center, width)
                                  : TimeProfile::increasing_tanh(amp, bound, center, width);
  } else if (kind == "custom") {
    std::vector<std::pair<double, double>> samples;
    if (!j.contains("samples") || !j.at("samples").is_array())
      throw ConfigError("epsilon.samples: expected an array of [t, eps] pairs");
    for (const json& p : j.at("samples")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ConfigError("epsilon.samples: expected [t, eps] pairs");
      samples.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    e = TimeProfile::custom_sampled(std::move(samples), bound);
  } else {
    throw ConfigError("epsilon.kind: unknown profile '" + kind + "'");
  }
  if (j.contains("eps_min")) e = e.with_eps_min(num(j, "eps_min", 1e-6));
  return e;
}

DiffusionLaw read_diffusion(const json& j) {
  check_keys(j, "diffusion", {"kind", "value", "lower", "upper", "width"});
  const std::string kind = str(j, "kind", "constant");
  if (kind == "constant") return DiffusionLaw::constant(num(j, "value", 3.0));
  const double lo = num(j, "lower", 2.5), hi = num(j, "upper", 4.0), w = num(j, "width", 1.0);
  if (kind == "tanh_ramp") return DiffusionLaw::tanh_ramp(lo, hi, w);
  if (kind == "rational") return DiffusionLaw::rational(lo, hi, w);
  throw ConfigError("diffusion.kind: unknown law '" + kind + "'");
}

Nonlinearity read_nonlinearity(const json& j) {
  check_keys(j, "nonlinearity", {"coefficients", "p", "C0", "C1", "C2", "eta_tilde"});
  Nonlinearity f;
  f.coefficients = numbers(j, "coefficients");
  f.p = num(j, "p", f.p);
  f.c0 = num(j, "C0", 0.0);
  f.c1 = num(j, "C1", 0.0);
  f.c2 = num(j, "C2", 0.0);
  f.eta_tilde = num(j, "eta_tilde", 0.0);
  return f;
}

DelayKernel read_delay(const json& j) {
  check_keys(j, "delay",
             {"kind", "window", "lag", "gain", "lipschitz", "kernel", "lag_amplitude",
              "lag_frequency"});
  const std::string kind = str(j, "kind", "discrete");
  const double window = num(j, "window", 1.0);
  const double lip = num(j, "lipschitz", 0.0);
  if (kind == "discrete")
    return DelayKernel::discrete(window, num(j, "lag", window), num(j, "gain", 0.0), lip);
  if (kind == "distributed") return DelayKernel::distributed(window, numbers(j, "kernel"), lip);
  if (kind == "variable")
    return DelayKernel::variable(window, num(j, "lag", window), num(j, "lag_amplitude", 0.0),
                                 num(j, "lag_frequency", 0.0), num(j, "gain", 0.0), lip);
  throw ConfigError("delay.kind: unknown kernel '" + kind + "'");
}

Forcing read_forcing(const json& j) {
  check_keys(j, "forcing",
             {"modes", "exp_rate", "tail_amplitude", "tail_exponent", "first_mode", "last_mode"});
  Forcing h;
  if (j.contains("modes")) {
    if (!j.at("modes").is_array()) throw ConfigError("forcing.modes: expected an array");
    for (const json& m : j.at("modes")) {
      check_keys(m, "forcing.modes[]", {"base", "amplitude", "frequency", "phase"});
      h.modes.push_back(ForcingMode{num(m, "base", 0.0), num(m, "amplitude", 0.0),
                                    num(m, "frequency", 0.0), num(m, "phase", 0.0)});
    }
  }
  h.exp_rate = num(j, "exp_rate", 0.0);
  h.tail_amplitude = num(j, "tail_amplitude", 0.0);
  h.tail_exponent = num(j, "tail_exponent", 0.0);
  h.first_mode = integer(j, "first_mode", 1);
  h.last_mode = integer(j, "last_mode", std::numeric_limits<int>::max());
  return h;
}

InitialHistory read_history(const json& j) {
  check_keys(j, "initial_history", {"modes"});
  InitialHistory phi;
  if (!j.contains("modes")) return phi;
  if (!j.at("modes").is_array()) throw ConfigError("initial_history.modes: expected an array");
  for (const json& m : j.at("modes")) {
    check_keys(m, "initial_history.modes[]",
               {"constant", "slope", "amplitude", "frequency", "exp_coefficient", "exp_rate"});
    HistoryMode h;
    h.constant = num(m, "constant", 0.0);
    h.slope = num(m, "slope", 0.0);
    h.amplitude = num(m, "amplitude", 0.0);
    h.frequency = num(m, "frequency", 0.0);
    h.exp_coefficient = num(m, "exp_coefficient", 0.0);
    h.exp_rate = num(m, "exp_rate", 0.0);
    phi.modes.push_back(h);
  }
  return phi;
}

Backend parse_backend(const std::string& s) {
  if (s == "serial") return Backend::serial;
  if (s == "parallel") return Backend::parallel;
  if (s == "automatic") return Backend::automatic;
  throw ConfigError("solver.backend: unknown backend '" + s + "'");
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::serial:
      return "serial";
    case Backend::parallel:
      return "parallel";
    case Backend::automatic:
      return "automatic";
  }
  return "automatic";
}

EpsWeight parse_weight(const std::string& s) {
  if (s == "argmax_node") return EpsWeight::argmax_node;
  if (s == "current") return EpsWeight::current;
  if (s == "window_min") return EpsWeight::window_min;
  if (s == "window_max") return EpsWeight::window_max;
  throw ConfigError("solver.eps_weight: unknown weight '" + s + "'");
}

const char* weight_name(EpsWeight w) {
  switch (w) {
    case EpsWeight::argmax_node:
      return "argmax_node";
    case EpsWeight::current:
      return "current";
    case EpsWeight::window_min:
      return "window_min";
    case EpsWeight::window_max:
      return "window_max";
  }
  return "argmax_node";
}

void read_solver(const json& j, Scenario& s) {
  check_keys(j, "solver",
             {"dt", "integrator", "grid_size", "record_every", "overflow_guard",
              "min_window_steps", "backend", "eps_weight", "tau", "t_end", "eta"});
  SolverConfig& c = s.solver;
  c.dt = num(j, "dt", c.dt);
  if (str(j, "integrator", "rk4") != "rk4") throw ConfigError("solver.integrator: only rk4");
  c.grid_size = integer(j, "grid_size", c.grid_size);
  c.record_every = integer(j, "record_every", c.record_every);
  c.overflow_guard = num(j, "overflow_guard", c.overflow_guard);
  c.min_window_steps = integer(j, "min_window_steps", c.min_window_steps);
  c.backend = parse_backend(str(j, "backend", "automatic"));
  c.eps_weight = parse_weight(str(j, "eps_weight", "argmax_node"));
  s.tau = num(j, "tau", s.tau);
  s.t_end = num(j, "t_end", s.t_end);
  if (j.contains("eta")) s.eta = num(j, "eta", 0.0);
}

json write_epsilon(const TimeProfile& e) {
  json j;
  switch (e.kind()) {
    case TimeProfile::Kind::constant:
      j["kind"] = "constant";
      j["value"] = e.amplitude();
      break;
    case TimeProfile::Kind::decreasing_tanh:
    case TimeProfile::Kind::increasing_tanh:
      j["kind"] = e.kind() == TimeProfile::Kind::decreasing_tanh ? "decreasing_tanh"
                                                                 : "increasing_tanh";
      j["amplitude"] = e.amplitude();
      j["center"] = e.center();
      j["width"] = e.width();
      break;
    case TimeProfile::Kind::custom_sampled: {
      j["kind"] = "custom";
      json arr = json::array();
      for (const auto& [t, v] : e.samples()) arr.push_back({t, v});
      j["samples"] = arr;
      break;
    }
  }
  j["bound"] = e.bound();
  j["eps_min"] = e.eps_min();
  return j;
}

json write_diffusion(const DiffusionLaw& a) {
  json j;
  switch (a.kind()) {
    case DiffusionLaw::Kind::constant:
      j["kind"] = "constant";
      j["value"] = a.value(0.0);
      return j;
    case DiffusionLaw::Kind::tanh_ramp:
      j["kind"] = "tanh_ramp";
      break;
    case DiffusionLaw::Kind::rational:
      j["kind"] = "rational";
      break;
  }
  j["lower"] = a.lower();
  j["upper"] = a.upper();
  j["width"] = a.width();
  return j;
}

json write_delay(const DelayKernel& g) {
  json j;
  j["window"] = g.window();
  j["lipschitz"] = g.lipschitz();
  switch (g.kind()) {
    case DelayKernel::Kind::discrete:
      j["kind"] = "discrete";
      j["lag"] = g.lag();
      j["gain"] = g.gain();
      break;
    case DelayKernel::Kind::distributed:
      j["kind"] = "distributed";
      j["kernel"] = g.kernel();
      break;
    case DelayKernel::Kind::variable:
      j["kind"] = "variable";
      j["lag"] = g.lag();
      j["lag_amplitude"] = g.lag_amplitude();
      j["lag_frequency"] = g.lag_frequency();
      j["gain"] = g.gain();
      break;
  }
  return j;
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  check_keys(doc, "scenario",
             {"name", "domain", "epsilon", "diffusion", "nonlocal", "nonlinearity", "delay",
              "forcing", "initial_history", "solver"});
  Scenario s;
  s.name = str(doc, "name", "custom");
  try {
    ProblemSpec& p = s.spec;
    if (doc.contains("domain")) p.domain = read_domain(doc.at("domain"));
    if (doc.contains("epsilon")) p.epsilon = read_epsilon(doc.at("epsilon"));
    if (doc.contains("diffusion")) p.diffusion = read_diffusion(doc.at("diffusion"));
    if (doc.contains("nonlocal")) {
      check_keys(doc.at("nonlocal"), "nonlocal", {"weights"});
      p.nonlocal.weights = numbers(doc.at("nonlocal"), "weights");
    }
    if (doc.contains("nonlinearity")) p.nonlinearity = read_nonlinearity(doc.at("nonlinearity"));
    if (doc.contains("delay")) p.delay = read_delay(doc.at("delay"));
    if (doc.contains("forcing")) p.forcing = read_forcing(doc.at("forcing"));
    if (doc.contains("initial_history"))
      p.initial_history = read_history(doc.at("initial_history"));
    if (doc.contains("solver")) read_solver(doc.at("solver"), s);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  const ProblemSpec& p = s.spec;
  json doc;
  doc["name"] = s.name;
  doc["domain"] = {{"length", p.domain.length}, {"modes", p.domain.mode_count}};
  doc["epsilon"] = write_epsilon(p.epsilon);
  doc["diffusion"] = write_diffusion(p.diffusion);
  doc["nonlocal"] = {{"weights", p.nonlocal.weights}};
  doc["nonlinearity"] = {{"coefficients", p.nonlinearity.coefficients},
                         {"p", p.nonlinearity.p},
                         {"C0", p.nonlinearity.c0},
                         {"C1", p.nonlinearity.c1},
                         {"C2", p.nonlinearity.c2},
                         {"eta_tilde", p.nonlinearity.eta_tilde}};
  doc["delay"] = write_delay(p.delay);
  json modes = json::array();
  for (const ForcingMode& m : p.forcing.modes)
    modes.push_back({{"base", m.base},
                     {"amplitude", m.amplitude},
                     {"frequency", m.frequency},
                     {"phase", m.phase}});
  json forcing = {{"modes", modes},
                  {"exp_rate", p.forcing.exp_rate},
                  {"tail_amplitude", p.forcing.tail_amplitude},
                  {"tail_exponent", p.forcing.tail_exponent}};
  if (p.forcing.first_mode != 1) forcing["first_mode"] = p.forcing.first_mode;
  if (p.forcing.last_mode != std::numeric_limits<int>::max())
    forcing["last_mode"] = p.forcing.last_mode;
  doc["forcing"] = forcing;
  json hist = json::array();
  for (const HistoryMode& m : p.initial_history.modes)
    hist.push_back({{"constant", m.constant},
                    {"slope", m.slope},
                    {"amplitude", m.amplitude},
                    {"frequency", m.frequency},
                    {"exp_coefficient", m.exp_coefficient},
                    {"exp_rate", m.exp_rate}});
  doc["initial_history"] = {{"modes", hist}};
  json solver = {{"dt", s.solver.dt},
                 {"integrator", "rk4"},
                 {"grid_size", s.solver.grid_size},
                 {"record_every", s.solver.record_every},
                 {"overflow_guard", s.solver.overflow_guard},
                 {"min_window_steps", s.solver.min_window_steps},
                 {"backend", backend_name(s.solver.backend)},
                 {"eps_weight", weight_name(s.solver.eps_weight)},
                 {"tau", s.tau},
                 {"t_end", s.t_end}};
  if (s.eta) solver["eta"] = *s.eta;
  doc["solver"] = solver;
  return doc.dump(2);
}

Scenario load_scenario(const std::string& uri) {
  const std::string prefix = "default:";
  if (uri.rfind(prefix, 0) == 0) return default_scenario(uri.substr(prefix.size()));
  std::ifstream in(uri);
  if (!in) throw ConfigError("cannot open scenario file '" + uri + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

}  // namespace pblab
