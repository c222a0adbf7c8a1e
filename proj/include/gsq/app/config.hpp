#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsq/cascaded.hpp"
#include "gsq/single_mode.hpp"
#include "gsq/sweep_table.hpp"
#include "json.hpp"

namespace gsq::app {

/// Malformed or inconsistent run configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void config_require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"steady",         "sweep-theta",    "sweep-depth", "optimize",
                                              "trajectory",     "cascaded-check", "feedback-check", "figures"};
  return names;
}

inline const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"Vu", "optTheta", "Vc", "fig5", "fig6", "varOD"};
  return names;
}

struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;

  static Grid parse(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
    config_require(second != std::string::npos && text.find(':', second + 1) == std::string::npos,
                   "grid must be start:stop:count, got '" + text + "'");
    Grid g;
    try {
      g.start = parse_number(text.substr(0, first));
      g.stop = parse_number(text.substr(first + 1, second - first - 1));
      const double count = parse_number(text.substr(second + 1));
      config_require(count == std::floor(count) && count >= 2 && count <= 1e8, "grid count must be an integer >= 2");
      g.count = static_cast<int>(count);
    } catch (const Error& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
    config_require(std::isfinite(g.start) && std::isfinite(g.stop), "grid bounds must be finite");
    return g;
  }

  std::string str() const { return format_number(start) + ":" + format_number(stop) + ":" + std::to_string(count); }

  std::vector<double> linear() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = start + (stop - start) * i / (count - 1);
    v.back() = stop;
    return v;
  }
};

/// Every field maps one-to-one onto a command-line flag and a key of the flat
/// JSON config file.
struct RunConfig {
  std::string command;
  double theta = 0.0;
  double epsilon = 0.0;
  double phi = 0.0;
  double d = 5.0;
  double n = 0.0;
  double gamma = 1.0;
  bool conditional = true;
  double omega = 0.0;
  bool rwa = true;
  std::optional<double> xi1;
  std::optional<double> xi2;
  std::optional<std::string> grid;
  std::optional<std::uint64_t> seed;
  double dt = 1e-3;
  double duration = 5.0;
  std::string out;
  double tol = 1e-12;
  std::string which;

  InteractionParams params() const {
    InteractionParams p;
    p.theta = theta;
    p.epsilon = epsilon;
    p.phi = phi;
    p.d = d;
    p.n = n;
    p.gamma = gamma;
    return p;
  }

  void validate() const {
    const auto& cmds = command_names();
    config_require(std::find(cmds.begin(), cmds.end(), command) != cmds.end(),
                   "unknown command '" + command + "'");
    try {
      params().validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    config_require(std::isfinite(omega) && omega >= 0.0, "omega must be finite and non-negative");
    config_require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
    config_require(duration > 0.0 && std::isfinite(duration), "duration must be positive");
    config_require(tol > 0.0 && tol < 1.0, "tol must lie in (0, 1)");
    config_require((!xi1 || std::isfinite(*xi1)) && (!xi2 || std::isfinite(*xi2)), "gains must be finite");
    config_require(xi1.has_value() == xi2.has_value(), "give both --xi1 and --xi2 or neither");
    if (grid) Grid::parse(*grid);
    if (command == "trajectory") config_require(seed.has_value(), "trajectory requires --seed");
    if (command == "figures" && !which.empty()) {
      const auto& figs = figure_names();
      config_require(std::find(figs.begin(), figs.end(), which) != figs.end(), "unknown figure '" + which + "'");
    }
  }
};

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  j["theta"] = c.theta;
  j["epsilon"] = c.epsilon;
  j["phi"] = c.phi;
  j["d"] = c.d;
  j["n"] = c.n;
  j["gamma"] = c.gamma;
  j["conditional"] = c.conditional;
  j["omega"] = c.omega;
  j["rwa"] = c.rwa;
  if (c.xi1) j["xi1"] = *c.xi1;
  if (c.xi2) j["xi2"] = *c.xi2;
  if (c.grid) j["grid"] = *c.grid;
  if (c.seed) j["seed"] = *c.seed;
  j["dt"] = c.dt;
  j["duration"] = c.duration;
  j["out"] = c.out;
  j["tol"] = c.tol;
  j["which"] = c.which;
  return j;
}

/// Keys written into manifests next to the config; ignored when a manifest is
/// fed back as a config file.
inline const std::set<std::string>& manifest_only_keys() {
  static const std::set<std::string> keys{"version", "elapsed_seconds", "metadata"};
  return keys;
}

/// Overlays the keys present in `j` onto `c`.
inline void merge_json(RunConfig& c, const nlohmann::json& j) {
  config_require(j.is_object(), "config must be a flat JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "command") c.command = value.get<std::string>();
      else if (key == "theta") c.theta = value.get<double>();
      else if (key == "epsilon") c.epsilon = value.get<double>();
      else if (key == "phi") c.phi = value.get<double>();
      else if (key == "d") c.d = value.get<double>();
      else if (key == "n") c.n = value.get<double>();
      else if (key == "gamma") c.gamma = value.get<double>();
      else if (key == "conditional") c.conditional = value.get<bool>();
      else if (key == "omega") c.omega = value.get<double>();
      else if (key == "rwa") c.rwa = value.get<bool>();
      else if (key == "xi1") c.xi1 = value.get<double>();
      else if (key == "xi2") c.xi2 = value.get<double>();
      else if (key == "grid") c.grid = value.get<std::string>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "dt") c.dt = value.get<double>();
      else if (key == "duration") c.duration = value.get<double>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "tol") c.tol = value.get<double>();
      else if (key == "which") c.which = value.get<std::string>();
      else if (!manifest_only_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  config_require(in.good(), "cannot read config file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace gsq::app
