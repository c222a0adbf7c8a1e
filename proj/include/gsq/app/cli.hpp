#pragma once

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gsq/app/config.hpp"
#include "gsq/app/run.hpp"

namespace gsq::app {

/// Parses argv into a RunConfig: the config file (if any) is applied first and
/// explicitly given flags override it.
inline int main_entry(int argc, const char* const* argv, const std::string& version, std::ostream& out,
                      std::ostream& err) {
  CLI::App cli{"Gaussian squeezing and entanglement dynamics of probed bosonic modes"};
  cli.set_version_flag("--version", version);

  RunConfig flags;
  std::string command, config_path, grid;
  double xi1 = 0.0, xi2 = 0.0;
  std::uint64_t seed = 0;
  bool conditional = false, unconditional = false, rwa = true;

  std::string commands = "run";
  for (const auto& c : command_names()) commands += "|" + c;
  cli.add_option("command", command, "Command: " + commands);
  std::vector<std::pair<std::string, CLI::Option*>> given;
  const auto track = [&](const std::string& key, CLI::Option* opt) { given.emplace_back(key, opt); };
  track("theta", cli.add_option("--theta", flags.theta, "Interaction angle (rad)"));
  track("epsilon", cli.add_option("--epsilon", flags.epsilon, "Beamsplitter reflectivity"));
  track("phi", cli.add_option("--phi", flags.phi, "Local-oscillator phase"));
  track("d", cli.add_option("--d", flags.d, "Optical depth"));
  track("n", cli.add_option("--n", flags.n, "Thermal occupation"));
  track("gamma", cli.add_option("--gamma", flags.gamma, "Decay rate"));
  auto* cond_flag = cli.add_flag("--conditional", conditional, "Conditional (measured) dynamics");
  auto* uncond_flag = cli.add_flag("--unconditional", unconditional, "Unconditional (dissipative) dynamics");
  cond_flag->excludes(uncond_flag);
  track("omega", cli.add_option("--omega", flags.omega, "Mode frequency for the cascaded lab frame"));
  track("rwa", cli.add_flag("--rwa", rwa, "Rotating-wave approximation (--rwa=false for the lab frame)"));
  track("xi1", cli.add_option("--xi1", xi1, "Feedback gain on P"));
  track("xi2", cli.add_option("--xi2", xi2, "Feedback gain on X"));
  track("grid", cli.add_option("--grid", grid, "Sweep grid start:stop:count"));
  track("seed", cli.add_option("--seed", seed, "RNG seed"));
  track("dt", cli.add_option("--dt", flags.dt, "Time step"));
  track("duration", cli.add_option("--duration", flags.duration, "Simulated duration"));
  track("out", cli.add_option("--out", flags.out, "Output CSV path (directory for figures)"));
  track("tol", cli.add_option("--tol", flags.tol, "Steady-state tolerance"));
  track("which", cli.add_option("--which", flags.which, "Figure: Vu|optTheta|Vc|fig5|fig6|varOD"));
  cli.add_option("--config", config_path, "Flat JSON config file");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return cli.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    cli.exit(e, out, err);
    return kExitConfig;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) merge_json(config, read_json_file(config_path));
    if (!command.empty() && command != "run") config.command = command;
    config_require(!config.command.empty(), "no command given (see --help)");
    config_require(command != "run" || !config_path.empty(), "run requires --config");

    nlohmann::json overrides = nlohmann::json::object();
    for (const auto& [key, opt] : given) {
      if (opt->count() == 0) continue;
      if (key == "theta") overrides[key] = flags.theta;
      else if (key == "epsilon") overrides[key] = flags.epsilon;
      else if (key == "phi") overrides[key] = flags.phi;
      else if (key == "d") overrides[key] = flags.d;
      else if (key == "n") overrides[key] = flags.n;
      else if (key == "gamma") overrides[key] = flags.gamma;
      else if (key == "omega") overrides[key] = flags.omega;
      else if (key == "rwa") overrides[key] = rwa;
      else if (key == "xi1") overrides[key] = xi1;
      else if (key == "xi2") overrides[key] = xi2;
      else if (key == "grid") overrides[key] = grid;
      else if (key == "seed") overrides[key] = seed;
      else if (key == "dt") overrides[key] = flags.dt;
      else if (key == "duration") overrides[key] = flags.duration;
      else if (key == "out") overrides[key] = flags.out;
      else if (key == "tol") overrides[key] = flags.tol;
      else if (key == "which") overrides[key] = flags.which;
    }
    if (cond_flag->count() > 0) overrides["conditional"] = true;
    if (uncond_flag->count() > 0) overrides["conditional"] = false;
    merge_json(config, overrides);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return run(config, version, out, err);
}

}  // namespace gsq::app
