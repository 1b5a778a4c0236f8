#pragma once

// Run configuration: YAML text -> validated RunConfig.
//
// All energies are in units of the fixed scale: h for the spin glass, J for
// the random-field model. `beta_grid` entries are beta times that scale; the
// token "inf" selects the ground state.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "quenchxy/quenchxy.hpp"

namespace quenchxy::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, int line, const std::string& message)
      : std::runtime_error(format(field, line, message)), field(field), line(line) {}

  std::string field;
  int line;  // 1-based, 0 if unknown

 private:
  static std::string format(const std::string& field, int line, const std::string& message) {
    std::string out = line > 0 ? "line " + std::to_string(line) + ": " : std::string{};
    if (!field.empty()) out += "field '" + field + "': ";
    return out + message;
  }
};

enum class RunMode { scores, selfavg };

struct Grid {
  std::vector<double> values;
};

struct RunConfig {
  RunMode mode = RunMode::scores;
  ModelKind model_kind = ModelKind::spin_glass;
  std::size_t n_sites = 20;
  double gamma = 0.4;
  std::vector<double> sigma_grid{0.3};  // one entry for score runs
  Boundary boundary = Boundary::periodic;
  std::vector<double> control_grid;
  std::vector<double> beta_grid{std::numeric_limits<double>::infinity()};
  std::vector<Observable> observables;
  RealizationPlan plan;
  bool totals = false;
  std::uint64_t master_seed = 0;
  std::string results_file = "results.csv";
  std::string manifest_file = "manifest.json";
  std::string selfavg_file = "selfavg_map.csv";
};

/// Values start, start + step, ... up to stop inclusive (with a relative slack
/// of 1e-9 steps so that decimal stops are not lost to rounding).
inline std::vector<double> expand_range(double start, double stop, double step) {
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = start + static_cast<double>(k) * step;
  return out;
}

namespace detail {

inline int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

template <class T>
T scalar_as(const YAML::Node& n, const std::string& field, const char* expected) {
  if (!n.IsScalar()) throw ConfigError(field, line_of(n), std::string("expected ") + expected);
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field, line_of(n), std::string("expected ") + expected + ", got '" + n.Scalar() + "'");
  }
}

inline double finite_number(const YAML::Node& n, const std::string& field) {
  const double v = scalar_as<double>(n, field, "a number");
  if (!std::isfinite(v)) throw ConfigError(field, line_of(n), "must be finite");
  return v;
}

inline double beta_value(const YAML::Node& n, const std::string& field) {
  if (n.IsScalar() && (n.Scalar() == "inf" || n.Scalar() == "ground")) return std::numeric_limits<double>::infinity();
  const double v = scalar_as<double>(n, field, "a number or 'inf'");
  if (!(v >= 0.0) || std::isnan(v)) throw ConfigError(field, line_of(n), "must be >= 0");
  return v;
}

// Either a {start, stop, step} map or an explicit list of numbers.
inline std::vector<double> grid(const YAML::Node& n, const std::string& field) {
  if (n.IsSequence()) {
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(finite_number(n[i], field + "[" + std::to_string(i) + "]"));
    if (out.empty()) throw ConfigError(field, line_of(n), "grid must be nonempty");
    return out;
  }
  if (!n.IsMap()) throw ConfigError(field, line_of(n), "expected a list or a {start, stop, step} map");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (key != "start" && key != "stop" && key != "step")
      throw ConfigError(field + "." + key, line_of(kv.first), "unknown key");
  }
  for (const char* key : {"start", "stop", "step"})
    if (!n[key]) throw ConfigError(field + "." + key, line_of(n), "missing");
  const double start = finite_number(n["start"], field + ".start");
  const double stop = finite_number(n["stop"], field + ".stop");
  const double step = finite_number(n["step"], field + ".step");
  if (!(step > 0.0)) throw ConfigError(field + ".step", line_of(n["step"]), "step must be > 0");
  if (stop < start) throw ConfigError(field, line_of(n), "grid must be nonempty (stop < start)");
  return expand_range(start, stop, step);
}

inline std::size_t count(const YAML::Node& n, const std::string& field, std::size_t minimum) {
  const auto v = scalar_as<long long>(n, field, "an integer");
  if (v < static_cast<long long>(minimum))
    throw ConfigError(field, line_of(n), "must be >= " + std::to_string(minimum));
  return static_cast<std::size_t>(v);
}

inline RealizationPlan plan(const YAML::Node& n, const std::string& field) {
  if (n.IsScalar()) return RealizationPlan::fixed(count(n, field, 2));
  if (!n.IsMap()) throw ConfigError(field, line_of(n), "expected an integer or a map");
  RealizationPlan p;
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    const std::string f = field + "." + key;
    if (key == "min") p.min_realizations = count(kv.second, f, 2);
    else if (key == "batch") p.batch = count(kv.second, f, 1);
    else if (key == "max") p.max_realizations = count(kv.second, f, 2);
    else if (key == "target_std_error") {
      p.target_std_error = finite_number(kv.second, f);
      if (!(p.target_std_error > 0.0)) throw ConfigError(f, line_of(kv.second), "must be > 0");
    } else {
      throw ConfigError(f, line_of(kv.first), "unknown key");
    }
  }
  if (p.max_realizations < p.min_realizations) throw ConfigError(field + ".max", line_of(n), "must be >= min");
  return p;
}

template <class F>
auto enum_value(const YAML::Node& n, const std::string& field, F&& parse) {
  const auto s = scalar_as<std::string>(n, field, "a name");
  try {
    return parse(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, line_of(n), e.what());
  }
}

}  // namespace detail

/// Parses and validates. Diagnostics carry the 1-based line and the field path.
inline RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", e.mark.line + 1, "YAML syntax error: " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("", detail::line_of(root), "top level must be a map");

  RunConfig c;
  bool have_control = false, have_observables = false, have_seed = false, have_sigma = false;
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (key == "mode") {
      const auto s = detail::scalar_as<std::string>(v, key, "'scores' or 'selfavg'");
      if (s == "scores") c.mode = RunMode::scores;
      else if (s == "selfavg") c.mode = RunMode::selfavg;
      else throw ConfigError(key, detail::line_of(v), "unknown mode '" + s + "' (expected scores or selfavg)");
    } else if (key == "model_kind") {
      c.model_kind = detail::enum_value(v, key, model_kind_from_string);
    } else if (key == "N") {
      c.n_sites = detail::count(v, key, 2);
    } else if (key == "gamma") {
      c.gamma = detail::finite_number(v, key);
      if (c.gamma == 0.0) throw ConfigError(key, detail::line_of(v), "must be nonzero");
    } else if (key == "sigma_d") {
      c.sigma_grid = v.IsScalar() ? std::vector<double>{detail::finite_number(v, key)} : detail::grid(v, key);
      for (double s : c.sigma_grid)
        if (s < 0.0) throw ConfigError(key, detail::line_of(v), "must be >= 0");
      have_sigma = true;
    } else if (key == "boundary") {
      c.boundary = detail::enum_value(v, key, boundary_from_string);
    } else if (key == "control_grid") {
      c.control_grid = detail::grid(v, key);
      have_control = true;
    } else if (key == "beta_grid") {
      if (!v.IsSequence() || v.size() == 0) throw ConfigError(key, detail::line_of(v), "expected a nonempty list");
      c.beta_grid.clear();
      for (std::size_t i = 0; i < v.size(); ++i)
        c.beta_grid.push_back(detail::beta_value(v[i], key + "[" + std::to_string(i) + "]"));
    } else if (key == "observables") {
      if (!v.IsSequence() || v.size() == 0) throw ConfigError(key, detail::line_of(v), "expected a nonempty list");
      for (std::size_t i = 0; i < v.size(); ++i)
        c.observables.push_back(
            detail::enum_value(v[i], key + "[" + std::to_string(i) + "]", observable_from_string));
      have_observables = true;
    } else if (key == "realizations") {
      c.plan = detail::plan(v, key);
    } else if (key == "totals") {
      c.totals = detail::scalar_as<bool>(v, key, "true or false");
    } else if (key == "master_seed") {
      c.master_seed = detail::scalar_as<std::uint64_t>(v, key, "a non-negative integer");
      have_seed = true;
    } else if (key == "output") {
      if (!v.IsMap()) throw ConfigError(key, detail::line_of(v), "expected a map");
      for (const auto& o : v) {
        const auto name = o.first.as<std::string>();
        const auto path = detail::scalar_as<std::string>(o.second, key + "." + name, "a file name");
        if (name == "results") c.results_file = path;
        else if (name == "manifest") c.manifest_file = path;
        else if (name == "selfavg") c.selfavg_file = path;
        else throw ConfigError(key + "." + name, detail::line_of(o.first), "unknown key");
      }
    } else {
      throw ConfigError(key, detail::line_of(kv.first), "unknown key");
    }
  }

  if (!have_control) throw ConfigError("control_grid", 0, "missing");
  if (!have_observables) throw ConfigError("observables", 0, "missing");
  if (!have_seed) throw ConfigError("master_seed", 0, "missing");
  if (!have_sigma) throw ConfigError("sigma_d", 0, "missing");
  if (c.mode == RunMode::scores && c.sigma_grid.size() != 1)
    throw ConfigError("sigma_d", detail::line_of(root["sigma_d"]), "score runs take a single value");
  if (c.mode == RunMode::selfavg && c.totals)
    throw ConfigError("totals", detail::line_of(root["totals"]), "not available in selfavg mode");
  return c;
}

/// Canonical JSON form of a config. Equal configs serialize identically; the
/// manifest hash is taken over this text.
inline nlohmann::json to_json(const RunConfig& c) {
  auto betas = nlohmann::json::array();
  for (double b : c.beta_grid) {
    if (std::isinf(b)) betas.push_back("inf");
    else betas.push_back(b);
  }
  auto observables = nlohmann::json::array();
  for (Observable o : c.observables) observables.push_back(std::string(to_string(o)));
  return {
      {"mode", c.mode == RunMode::scores ? "scores" : "selfavg"},
      {"model_kind", std::string(to_string(c.model_kind))},
      {"N", c.n_sites},
      {"gamma", c.gamma},
      {"sigma_d", c.sigma_grid},
      {"boundary", std::string(to_string(c.boundary))},
      {"control_grid", c.control_grid},
      {"beta_grid", betas},
      {"observables", observables},
      {"realizations",
       {{"min", c.plan.min_realizations},
        {"batch", c.plan.batch},
        {"max", c.plan.max_realizations},
        {"target_std_error", c.plan.target_std_error}}},
      {"totals", c.totals},
      {"master_seed", c.master_seed},
  };
}

}  // namespace quenchxy::cli
