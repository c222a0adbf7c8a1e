#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gsq/app/config.hpp"
#include "gsq/app/figures.hpp"
#include "gsq/cascaded.hpp"
#include "gsq/core/evolve.hpp"
#include "gsq/core/trajectory.hpp"
#include "gsq/feedback.hpp"
#include "gsq/optimizer.hpp"
#include "gsq/single_mode.hpp"

namespace gsq::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Tables produced by one command, keyed by file stem, plus a short
/// human-readable summary for stdout.
struct CommandResult {
  std::vector<std::pair<std::string, SweepTable>> tables;
  std::string summary;
};

namespace detail {

inline std::string describe_params(const RunConfig& c) {
  std::ostringstream os;
  os << "theta=" << format_number(c.theta) << " epsilon=" << format_number(c.epsilon) << " phi=" << format_number(c.phi)
     << " d=" << format_number(c.d) << " n=" << format_number(c.n) << " gamma=" << format_number(c.gamma)
     << " conditional=" << (c.conditional ? "true" : "false");
  return os.str();
}

inline SweepTable single_row(std::vector<std::pair<std::string, double>> cells) {
  SweepTable t;
  for (auto& [name, value] : cells) t.add_column(std::move(name), {value});
  return t;
}

inline std::string summarize(const SweepTable& t) {
  std::ostringstream os;
  for (std::size_t c = 0; c < t.cols(); ++c) {
    os << (c ? " " : "") << t.names()[c] << "=" << std::setprecision(9) << t.column(t.names()[c]).front();
  }
  return os.str();
}

inline SteadyOptions steady_options(const RunConfig& c) {
  SteadyOptions o;
  o.tol = c.tol;
  return o;
}

inline std::vector<double> grid_or(const RunConfig& c, const std::string& fallback) {
  return Grid::parse(c.grid.value_or(fallback)).linear();
}

inline CommandResult cmd_steady(const RunConfig& c) {
  const InteractionParams p = c.params();
  const std::string tag = c.conditional ? "_c" : "_u";
  const SteadyResult r = c.conditional ? conditional_steady(p) : unconditional_steady(p);
  double v_engine = kInf, u_engine = kInf;
  if (r.stable) {
    const auto s = steady_covariance<1>(make_spec(p, c.conditional), c.conditional, steady_options(c));
    v_engine = s.covariance(0, 0);
    u_engine = s.covariance(1, 1);
  }
  SweepTable t = single_row({{"theta", p.theta},
                             {"epsilon", p.epsilon},
                             {"d", p.d},
                             {"n", p.n},
                             {"V" + tag, r.v_squeezed},
                             {"U" + tag, r.u_antisqueezed},
                             {"V_engine", v_engine},
                             {"U_engine", u_engine},
                             {"stable", r.stable ? 1.0 : 0.0}});
  std::ostringstream os;
  os << "V" << tag << " = " << std::setprecision(9) << r.v_squeezed << "\nU" << tag << " = " << r.u_antisqueezed;
  if (!r.stable) os << "\n(unbounded: no steady state for this quadrature)";
  return {{{"steady", std::move(t)}}, os.str()};
}

inline CommandResult cmd_sweep_theta(const RunConfig& c) {
  const double edge = std::numbers::pi / 2 - kThetaEdge;
  SweepTable t = variance_curves(grid_or(c, format_number(-edge) + ":" + format_number(edge) + ":301"), c.params());
  t.validate();
  return {{{"sweep-theta", std::move(t)}}, "rows=" + std::to_string(t.rows())};
}

inline CommandResult cmd_sweep_depth(const RunConfig& c) {
  const InteractionParams base = c.params();
  const std::vector<double> depths = grid_or(c, "1:1000:100");
  for (double d : depths) config_require(d > 0.0, "depth grid must be positive");
  struct Row {
    double vu, vc, uc, stable, tu, vuo, tc, vco, uco;
  };
  const auto rows = parallel_map(depths, [&](double d) {
    const bool stable = 1.0 + d * std::sin(2.0 * base.theta) / 2.0 > 0.0;
    const OptimumReport u = theta_opt_unconditional(d, base.n);
    const OptimumReport k = theta_opt_conditional(d, base.n, base.epsilon);
    return Row{depth_form::squeezed_unconditional<double>(base.theta, d, base.n),
               depth_form::squeezed_conditional<double>(base.theta, d, base.n, base.epsilon),
               depth_form::antisqueezed_conditional<double>(base.theta, d, base.n, base.epsilon),
               stable ? 1.0 : 0.0,
               u.theta_opt,
               u.v_opt,
               k.theta_opt,
               k.v_opt,
               k.u_at_opt};
  });
  std::vector<std::vector<double>> cols(9);
  for (const Row& r : rows) {
    const double vals[] = {r.vu, r.vc, r.uc, r.stable, r.tu, r.vuo, r.tc, r.vco, r.uco};
    for (std::size_t i = 0; i < 9; ++i) cols[i].push_back(vals[i]);
  }
  SweepTable t;
  t.add_column("d", depths);
  const char* names[] = {"V_u", "V_c", "U_c", "stable", "theta_u_opt", "V_u_opt", "theta_c_opt", "V_c_opt", "U_c_opt"};
  for (std::size_t i = 0; i < 9; ++i) t.add_column(names[i], std::move(cols[i]));
  t.validate();
  return {{{"sweep-depth", std::move(t)}}, "rows=" + std::to_string(t.rows())};
}

inline CommandResult cmd_optimize(const RunConfig& c) {
  const InteractionParams p = c.params();
  const OptimumReport u = theta_opt_unconditional(p.d, p.n);
  const OptimumReport k = theta_opt_conditional(p.d, p.n, p.epsilon);
  std::vector<std::pair<std::string, double>> cells{{"d", p.d},
                                                    {"n", p.n},
                                                    {"epsilon", p.epsilon},
                                                    {"theta_u_opt", u.theta_opt},
                                                    {"V_u_opt", u.v_opt},
                                                    {"U_u_opt", u.u_at_opt},
                                                    {"theta_c_opt", k.theta_opt},
                                                    {"V_c_opt", k.v_opt},
                                                    {"U_c_opt", k.u_at_opt},
                                                    {"residual_c", k.residual},
                                                    {"cubic_root", k.method == OptimumMethod::cubic_root ? 1.0 : 0.0},
                                                    {"n_c_unconditional",
                                                     critical_occupation(p.d, OccupationKind::unconditional).n_crit}};
  if (const auto tc = theta_critical(p.d)) cells.emplace_back("theta_critical", *tc);
  if (p.epsilon > 0.0) cells.emplace_back("d_star", d_star(p.n, p.epsilon));
  SweepTable t = single_row(std::move(cells));
  return {{{"optimize", t}}, summarize(t)};
}

inline CommandResult cmd_trajectory(const RunConfig& c) {
  const InteractionParams p = c.params();
  const SystemSpec<1> spec = make_spec(p, c.conditional);
  const auto steps = static_cast<std::size_t>(std::llround(c.duration / c.dt));
  TrajectoryOptions opts;
  opts.record_covariance = true;
  opts.sample_every = std::max<std::size_t>(1, steps / 2000);
  const auto traj = simulate_trajectory<1>(spec, GaussianState<1>::vacuum(), c.duration, c.dt, *c.seed, opts);
  std::vector<double> x, q, v, u, cov;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    x.push_back(traj.displacements[i](0));
    q.push_back(traj.displacements[i](1));
    v.push_back(traj.covariances[i](0, 0));
    u.push_back(traj.covariances[i](1, 1));
    cov.push_back(traj.covariances[i](0, 1));
  }
  SweepTable t;
  t.add_column("t", traj.times);
  t.add_column("x", std::move(x));
  t.add_column("p", std::move(q));
  t.add_column("V", std::move(v));
  t.add_column("U", std::move(u));
  t.add_column("C", std::move(cov));
  return {{{"trajectory", std::move(t)}}, "samples=" + std::to_string(traj.times.size())};
}

inline CommandResult cmd_cascaded_check(const RunConfig& c, std::ostream& err) {
  const InteractionParams p = c.params();
  const CascadedParams cp = CascadedParams::symmetric(p, c.omega, c.rwa);
  if (c.omega > 0.0) {
    if (const auto w = cp.rwa_warning()) err << "warning: " << *w << '\n';
  }
  const SteadyOptions opts = steady_options(c);
  const EprSteady steady = epr_steady(cp, c.conditional, opts);
  const EprBlocks& blocks = steady.blocks;
  const EntanglementWitness w = entanglement_criterion(blocks.plus, blocks.minus);

  const SteadyResult single = c.conditional ? conditional_steady(p) : unconditional_steady(p);
  Rates half = rates_of(p);
  half.g /= 2.0;
  const SteadyResult single_half = c.conditional ? conditional_steady(p, half) : unconditional_steady(p, half);

  std::vector<std::pair<std::string, double>> cells{{"V_plus", blocks.plus(0, 0)},
                                                    {"U_plus", steady.bounded ? blocks.plus(1, 1) : kInf},
                                                    {"V_minus", blocks.minus(1, 1)},
                                                    {"U_minus", steady.bounded ? blocks.minus(0, 0) : kInf},
                                                    {"cross_max", steady.cross_max},
                                                    {"V_single", single.v_squeezed},
                                                    {"U_single", single.u_antisqueezed},
                                                    {"V_single_half_g", single_half.v_squeezed},
                                                    {"epr_sum", w.epr_sum},
                                                    {"entangled", w.entangled ? 1.0 : 0.0}};
  if (c.rwa) {
    const auto [plus_spec, minus_spec] = make_rwa_epr_specs(cp, c.conditional);
    SteadyOptions plus_opts = opts, minus_opts = opts;
    if (!steady.bounded) {
      plus_opts.watch = {0};
      minus_opts.watch = {1};
    }
    cells.emplace_back("V_plus_factorized", steady_covariance<1>(plus_spec, c.conditional, plus_opts).covariance(0, 0));
    cells.emplace_back("V_minus_factorized",
                       steady_covariance<1>(minus_spec, c.conditional, minus_opts).covariance(1, 1));
  }
  SweepTable t = single_row(std::move(cells));
  return {{{"cascaded-check", t}}, summarize(t)};
}

inline CommandResult cmd_feedback_check(const RunConfig& c) {
  const InteractionParams p = c.params();
  FeedbackGains gains;
  if (c.xi1) {
    gains = {*c.xi1, *c.xi2};
  } else {
    gains = optimal_gains(p).gains;
  }
  const SteadyResult fb = feedback_steady(p, gains);
  const auto engine = steady_covariance<1>(feedback_spec(p, gains), false, steady_options(c));
  const SteadyResult cond = conditional_steady(p);
  SweepTable t = single_row({{"xi1", gains.xi1},
                             {"xi2", gains.xi2},
                             {"V_fb", fb.v_squeezed},
                             {"U_fb", fb.u_antisqueezed},
                             {"V_engine", engine.covariance(0, 0)},
                             {"U_engine", engine.covariance(1, 1)},
                             {"V_c", cond.v_squeezed},
                             {"U_c", cond.u_antisqueezed}});
  return {{{"feedback-check", t}}, summarize(t)};
}

inline CommandResult cmd_figures(const RunConfig& c) {
  std::vector<std::string> which;
  if (c.which.empty()) {
    which = figure_names();
  } else {
    which.push_back(c.which);
  }
  CommandResult out;
  for (const std::string& w : which) {
    SweepTable t = figure(w);
    t.validate();
    out.tables.emplace_back(w, std::move(t));
  }
  out.summary = "figures=" + std::to_string(out.tables.size());
  return out;
}

inline CommandResult dispatch(const RunConfig& c, std::ostream& err) {
  if (c.command == "steady") return cmd_steady(c);
  if (c.command == "sweep-theta") return cmd_sweep_theta(c);
  if (c.command == "sweep-depth") return cmd_sweep_depth(c);
  if (c.command == "optimize") return cmd_optimize(c);
  if (c.command == "trajectory") return cmd_trajectory(c);
  if (c.command == "cascaded-check") return cmd_cascaded_check(c, err);
  if (c.command == "feedback-check") return cmd_feedback_check(c);
  if (c.command == "figures") return cmd_figures(c);
  throw ConfigError("unknown command '" + c.command + "'");
}

inline std::filesystem::path manifest_path(const std::filesystem::path& csv) {
  std::filesystem::path m = csv;
  m.replace_extension(".json");
  return m;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  config_require(f.good(), "cannot write '" + path.string() + "'");
  f << text;
  f.flush();
  config_require(f.good(), "failed writing '" + path.string() + "'");
}

}  // namespace detail

/// Runs one configured command. Results go to `out` (CSV on stdout when no
/// output path is configured); with an output path each table is written as
/// CSV next to a JSON manifest holding the config, `version` and
/// `elapsed_seconds`. `figures` treats the output path as a directory.
inline int run(const RunConfig& config, const std::string& version, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    config.validate();
    CommandResult result = detail::dispatch(config, err);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (config.out.empty()) {
      if (config.command == "steady" || config.command == "optimize" || config.command == "cascaded-check" ||
          config.command == "feedback-check") {
        out << result.summary << '\n';
      } else {
        for (const auto& [name, table] : result.tables) table.write_csv(out);
      }
      return kExitOk;
    }

    const bool directory = config.command == "figures";
    if (directory) {
      std::error_code ec;
      std::filesystem::create_directories(config.out, ec);
      config_require(!ec, "cannot create output directory '" + config.out + "'");
    }
    for (const auto& [name, table] : result.tables) {
      const std::filesystem::path csv =
          directory ? std::filesystem::path(config.out) / (name + ".csv") : std::filesystem::path(config.out);
      RunConfig echo = config;
      if (directory) echo.which = name;
      nlohmann::json manifest = to_json(echo);
      manifest["version"] = version;
      manifest["elapsed_seconds"] = elapsed;
      manifest["metadata"] = table.metadata;
      detail::write_text(csv, table.to_csv());
      detail::write_text(detail::manifest_path(csv), manifest.dump(2) + "\n");
    }
    out << result.summary << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << " [" << detail::describe_params(config) << "]\n";
    return is_numerical(e.code()) ? kExitNumerical : kExitConfig;
  }
}

}  // namespace gsq::app
