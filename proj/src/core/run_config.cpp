// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/run_config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "core/errors.hpp"

namespace chhs {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Convergence: return "convergence";
    case Scenario::Spinodal: return "spinodal";
    case Scenario::InterfaceBreakup: return "interface-breakup";
    case Scenario::Custom: return "custom";
  }
  return "custom";
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Cosine: return "cosine";
    case InitialKind::Random: return "random";
    case InitialKind::Layers: return "layers";
    case InitialKind::Constant: return "constant";
  }
  return "constant";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "convergence") return Scenario::Convergence;
  if (s == "spinodal") return Scenario::Spinodal;
  if (s == "interface-breakup" || s == "interface_breakup") return Scenario::InterfaceBreakup;
  if (s == "custom") return Scenario::Custom;
  throw ConfigError("unknown scenario '" + s + "' (expected convergence|spinodal|interface-breakup|custom)");
}

InitialKind initial_kind_from_string(const std::string& s) {
  if (s == "cosine") return InitialKind::Cosine;
  if (s == "random") return InitialKind::Random;
  if (s == "layers") return InitialKind::Layers;
  if (s == "constant") return InitialKind::Constant;
  throw ConfigError("unknown initial condition '" + s + "' (expected cosine|random|layers|constant)");
}

double RunConfig::h() const { return std::hypot(domain.width() / n, domain.height() / n); }

double RunConfig::time_step() const { return dt_over_h ? *dt_over_h * h() : scheme.dt; }

int RunConfig::step_count() const {
  const double ratio = final_time / time_step();
  return static_cast<int>(std::ceil(ratio * (1.0 - 1e-12)));
}

void RunConfig::validate() const {
  domain.validate();
  if (n < 1) throw ConfigError("n must be >= 1");
  if (order != 1 && order != 2) throw ConfigError("order must be 1 or 2");
  if (!(final_time > 0.0) || !std::isfinite(final_time)) throw ConfigError("final_time must be > 0");
  if (output_cadence < 1) throw ConfigError("output_cadence must be >= 1");
  if (dt_over_h && !(*dt_over_h > 0.0)) throw ConfigError("dt_over_h must be > 0");
  if (initial == InitialKind::Random && !seed) throw ConfigError("random initial condition requires a seed");
  if (initial == InitialKind::Random && !(initial_amplitude >= 0.0)) throw ConfigError("initial_amplitude must be >= 0");
  if (check_steps < 0) throw ConfigError("check_steps must be >= 0");
  if (!(energy_tolerance > 0.0)) throw ConfigError("energy_tolerance must be > 0");
  for (int l : levels) {
    if (l < 1) throw ConfigError("levels must be positive mesh sizes");
  }
  model.validate();
  SchemeConfig resolved = scheme;
  resolved.dt = time_step();
  resolved.validate();
}

RunConfig preset(Scenario s) {
  RunConfig c;
  c.scenario = s;
  switch (s) {
    case Scenario::Convergence:
      c.domain = {0.0, 1.0, 0.0, 1.0};
      c.n = 32;
      c.model.epsilon = 0.05;
      c.model.peclet = 20.0;
      c.model.gamma = 0.005;
      c.model.eta_model = ViscosityModel::LinearTruncated;
      c.model.eta1 = 0.0042;
      c.model.eta2 = 0.083;
      c.model.mobility_model = MobilityModel::RegularizedDegenerate;
      c.model.lambda = 0.0;
      c.dt_over_h = 0.2 / std::sqrt(2.0);
      c.final_time = 0.2;
      c.output_cadence = 8;
      c.initial = InitialKind::Cosine;
      c.levels = {32, 64, 128};
      break;
    case Scenario::Spinodal:
      c.domain = {0.0, 6.4, 0.0, 6.4};
      c.n = 128;
      c.model.epsilon = 0.03;
      c.model.peclet = 1.0;
      c.model.gamma = 0.06;
      c.model.eta_model = ViscosityModel::Constant;
      c.model.eta1 = 0.083;
      c.model.eta2 = 0.083;
      c.model.mobility_model = MobilityModel::RegularizedDegenerate;
      c.model.lambda = 0.0;
      c.scheme.dt = 0.05;
      c.final_time = 5.0;
      c.output_cadence = 20;
      c.initial = InitialKind::Random;
      c.initial_mean = -0.05;
      c.initial_amplitude = 0.05;
      break;
    case Scenario::InterfaceBreakup:
      c.domain = {0.0, 2.0 * std::numbers::pi, 0.0, 2.0 * std::numbers::pi};
      c.n = 64;
      c.order = 2;
      c.model.epsilon = 0.01;
      c.model.peclet = 100.0;
      c.model.gamma = 0.25;
      c.model.eta_model = ViscosityModel::LinearTruncated;
      c.model.eta1 = 0.1;
      c.model.eta2 = 0.5;
      c.model.mobility_model = MobilityModel::Constant;
      c.model.mobility = 1.0;
      c.model.lambda = 2.946;
      c.scheme.dt = 0.005;
      c.final_time = 10.0;
      c.output_cadence = 50;
      c.initial = InitialKind::Layers;
      break;
    case Scenario::Custom:
      break;
  }
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x)) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a finite number");
  }
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
  }
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < -2147483647LL || x > 2147483647LL) throw ConfigError("key '" + key + "': value out of range");
  return static_cast<int>(x);
}

// shortest text that parses back to the same double
std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace

void set_value(RunConfig& c, const std::string& key, const std::string& value) {
  const std::string& v = value;
  if (key == "scenario") {
    c.scenario = scenario_from_string(v);
  } else if (key == "x_min") {
    c.domain.ax = to_double(key, v);
  } else if (key == "x_max") {
    c.domain.bx = to_double(key, v);
  } else if (key == "y_min") {
    c.domain.ay = to_double(key, v);
  } else if (key == "y_max") {
    c.domain.by = to_double(key, v);
  } else if (key == "n") {
    c.n = to_int(key, v);
  } else if (key == "level") {
    const int l = to_int(key, v);
    if (l < 0 || l > 14) throw ConfigError("level must be in [0, 14]");
    c.n = 1 << l;
  } else if (key == "order") {
    c.order = to_int(key, v);
  } else if (key == "epsilon") {
    c.model.epsilon = to_double(key, v);
  } else if (key == "peclet") {
    c.model.peclet = to_double(key, v);
  } else if (key == "gamma") {
    c.model.gamma = to_double(key, v);
  } else if (key == "eta_model") {
    c.model.eta_model = viscosity_model_from_string(v);
  } else if (key == "eta1") {
    c.model.eta1 = to_double(key, v);
  } else if (key == "eta2") {
    c.model.eta2 = to_double(key, v);
  } else if (key == "mobility_model") {
    c.model.mobility_model = mobility_model_from_string(v);
  } else if (key == "mobility") {
    c.model.mobility = to_double(key, v);
  } else if (key == "lambda") {
    c.model.lambda = to_double(key, v);
  } else if (key == "phi_bar") {
    if (v == "auto") {
      c.model.phi_bar.reset();
    } else {
      c.model.phi_bar = to_double(key, v);
    }
  } else if (key == "dt") {
    c.scheme.dt = to_double(key, v);
    c.dt_over_h.reset();
  } else if (key == "dt_over_h") {
    c.dt_over_h = to_double(key, v);
  } else if (key == "newton_tol") {
    c.scheme.newton_tol = to_double(key, v);
  } else if (key == "newton_max_iter") {
    c.scheme.newton_max_iter = to_int(key, v);
  } else if (key == "newton_reuse") {
    c.scheme.newton_reuse = to_double(key, v);
  } else if (key == "linear_tol") {
    c.scheme.linear_tol = to_double(key, v);
  } else if (key == "linear_max_iter") {
    c.scheme.linear_max_iter = to_int(key, v);
  } else if (key == "quad_degree_bilinear") {
    c.scheme.quad_degree_bilinear = to_int(key, v);
  } else if (key == "quad_degree_nonlinear") {
    c.scheme.quad_degree_nonlinear = to_int(key, v);
  } else if (key == "final_time") {
    c.final_time = to_double(key, v);
  } else if (key == "output_cadence") {
    c.output_cadence = to_int(key, v);
  } else if (key == "seed") {
    const long long s = to_integer(key, v);
    if (s < 0) throw ConfigError("seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "output_dir") {
    if (v.empty()) throw ConfigError("output_dir must not be empty");
    c.output_dir = v;
  } else if (key == "initial_condition") {
    c.initial = initial_kind_from_string(v);
  } else if (key == "initial_mean") {
    c.initial_mean = to_double(key, v);
  } else if (key == "initial_amplitude") {
    c.initial_amplitude = to_double(key, v);
  } else if (key == "initial_value") {
    c.initial_value = to_double(key, v);
  } else if (key == "levels") {
    std::string s = v;
    for (char& ch : s) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream in(s);
    std::vector<int> levels;
    std::string tok;
    while (in >> tok) levels.push_back(to_int(key, tok));
    c.levels = std::move(levels);
  } else if (key == "check_steps") {
    c.check_steps = to_int(key, v);
  } else if (key == "energy_tolerance") {
    c.energy_tolerance = to_double(key, v);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::map<std::string, int> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (seen.count(key)) {
      throw ConfigError(where + ": duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
    }
    seen[key] = lineno;
    entries.emplace_back(std::move(key), std::move(value));
  }

  if (seen.count("dt") && seen.count("dt_over_h")) {
    throw ConfigError(source + ": 'dt' and 'dt_over_h' are mutually exclusive");
  }
  RunConfig cfg;
  for (const auto& [k, v] : entries) {
    if (k == "scenario") cfg = preset(scenario_from_string(v));
  }
  for (const auto& [k, v] : entries) {
    if (k == "scenario") continue;
    try {
      set_value(cfg, k, v);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(seen[k]) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  return parse_config(in, path);
}

std::string echo(const RunConfig& c) {
  std::ostringstream o;
  auto kv = [&](const char* k, const std::string& v) { o << k << " = " << v << '\n'; };
  kv("scenario", to_string(c.scenario));
  kv("x_min", fmt(c.domain.ax));
  kv("x_max", fmt(c.domain.bx));
  kv("y_min", fmt(c.domain.ay));
  kv("y_max", fmt(c.domain.by));
  kv("n", std::to_string(c.n));
  kv("order", std::to_string(c.order));
  kv("epsilon", fmt(c.model.epsilon));
  kv("peclet", fmt(c.model.peclet));
  kv("gamma", fmt(c.model.gamma));
  kv("eta_model", to_string(c.model.eta_model));
  kv("eta1", fmt(c.model.eta1));
  kv("eta2", fmt(c.model.eta2));
  kv("mobility_model", to_string(c.model.mobility_model));
  kv("mobility", fmt(c.model.mobility));
  kv("lambda", fmt(c.model.lambda));
  kv("phi_bar", c.model.phi_bar ? fmt(*c.model.phi_bar) : "auto");
  if (c.dt_over_h) {
    kv("dt_over_h", fmt(*c.dt_over_h));
    o << "# resolved dt = " << fmt(c.time_step()) << '\n';
  } else {
    kv("dt", fmt(c.scheme.dt));
  }
  kv("newton_tol", fmt(c.scheme.newton_tol));
  kv("newton_max_iter", std::to_string(c.scheme.newton_max_iter));
  kv("newton_reuse", fmt(c.scheme.newton_reuse));
  kv("linear_tol", fmt(c.scheme.linear_tol));
  kv("linear_max_iter", std::to_string(c.scheme.linear_max_iter));
  kv("quad_degree_bilinear", std::to_string(c.scheme.quad_degree_bilinear));
  kv("quad_degree_nonlinear", std::to_string(c.scheme.quad_degree_nonlinear));
  kv("final_time", fmt(c.final_time));
  o << "# steps = " << c.step_count() << '\n';
  kv("output_cadence", std::to_string(c.output_cadence));
  if (c.seed) kv("seed", std::to_string(*c.seed));
  kv("output_dir", c.output_dir);
  kv("initial_condition", to_string(c.initial));
  kv("initial_mean", fmt(c.initial_mean));
  kv("initial_amplitude", fmt(c.initial_amplitude));
  kv("initial_value", fmt(c.initial_value));
  if (!c.levels.empty()) {
    std::string l;
    for (int x : c.levels) l += (l.empty() ? "" : " ") + std::to_string(x);
    kv("levels", l);
  }
  kv("check_steps", std::to_string(c.check_steps));
  kv("energy_tolerance", fmt(c.energy_tolerance));
  return o.str();
}

}  // namespace chhs
