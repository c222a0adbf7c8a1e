#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gsq/optimizer.hpp"
#include "gsq/parallel.hpp"
#include "gsq/single_mode.hpp"
#include "gsq/sweep_table.hpp"

namespace gsq::app {

inline constexpr double kThetaEdge = 1e-3;       // distance kept from ±π/2
inline constexpr double kStabilityMargin = 1e-4;  // unconditional curves start at θ_c + margin
inline constexpr int kThetaPoints = 2001;

inline std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (count - 1);
  v.back() = b;
  return v;
}

inline std::vector<double> logspace(double a, double b, int count) {
  std::vector<double> v = linspace(std::log10(a), std::log10(b), count);
  for (double& x : v) x = std::pow(10.0, x);
  v.front() = a;
  v.back() = b;
  return v;
}

/// Full θ range with θ_c + margin inserted, so unconditional curves start
/// exactly at the clipped boundary.
inline std::vector<double> theta_grid_with_boundary(double d) {
  std::vector<double> grid = linspace(-std::numbers::pi / 2 + kThetaEdge, std::numbers::pi / 2 - kThetaEdge, kThetaPoints);
  if (const auto tc = theta_critical(d)) {
    grid.push_back(*tc + kStabilityMargin);
    std::sort(grid.begin(), grid.end());
  }
  return grid;
}

inline double unconditional_critical_occupation(double d) {
  return critical_occupation(d, OccupationKind::unconditional).n_crit;
}

/// Unconditional squeezed variance against θ for (d, n) = (5, 0), (50, 0) and
/// (50, n_c); each curve spans its own stable interval, so rows are long format.
inline SweepTable figure_vu() {
  struct Curve {
    double d, n;
  };
  const std::vector<Curve> curves{{5.0, 0.0}, {50.0, 0.0}, {50.0, unconditional_critical_occupation(50.0)}};
  std::vector<double> id, dc, nc, th, vu;
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const Curve c = curves[k];
    const double lo = theta_critical(c.d).value_or(-std::numbers::pi / 2 + kThetaEdge - kStabilityMargin) + kStabilityMargin;
    for (double theta : linspace(lo, std::numbers::pi / 2 - kThetaEdge, kThetaPoints)) {
      id.push_back(static_cast<double>(k));
      dc.push_back(c.d);
      nc.push_back(c.n);
      th.push_back(theta);
      vu.push_back(depth_form::squeezed_unconditional<double>(theta, c.d, c.n));
    }
  }
  SweepTable t;
  t.add_column("curve", std::move(id));
  t.add_column("d", std::move(dc));
  t.add_column("n", std::move(nc));
  t.add_column("theta", std::move(th));
  t.add_column("V_u", std::move(vu));
  t.metadata["figure"] = "Vu";
  return t;
}

/// Optimal angles against optical depth at n = 0, ε = 0, with their large-d asymptotes.
inline SweepTable figure_opt_theta() {
  const double n = 0.0;
  const std::vector<double> depths = logspace(2.5, 1e4, 301);
  struct Row {
    double tu, tc;
  };
  const auto rows = parallel_map(depths, [&](double d) {
    return Row{theta_opt_unconditional(d, n).theta_opt, theta_opt_conditional(d, n, 0.0).theta_opt};
  });
  std::vector<double> tu, tc, au, ac;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    tu.push_back(rows[i].tu);
    tc.push_back(rows[i].tc);
    au.push_back(theta_opt_unconditional_asymptotic(depths[i], n));
    ac.push_back(theta_opt_conditional_asymptotic(depths[i], n));
  }
  SweepTable t;
  t.add_column("d", depths);
  t.add_column("theta_u_opt", std::move(tu));
  t.add_column("theta_c_opt", std::move(tc));
  t.add_column("theta_u_asymptote", std::move(au));
  t.add_column("theta_c_asymptote", std::move(ac));
  t.metadata["figure"] = "optTheta";
  t.metadata["n"] = n;
  t.metadata["epsilon"] = 0.0;
  return t;
}

/// Conditional variances at ε = 0 for the same three (d, n) pairs as figure_vu.
/// U_c is unbounded for θ ≤ θ_c; those rows have stable = 0.
inline SweepTable figure_vc() {
  struct Curve {
    double d, n;
  };
  const std::vector<Curve> curves{{5.0, 0.0}, {50.0, 0.0}, {50.0, unconditional_critical_occupation(50.0)}};
  const std::vector<double> grid =
      linspace(-std::numbers::pi / 2 + kThetaEdge, std::numbers::pi / 2 - kThetaEdge, kThetaPoints);
  std::vector<double> id, dc, nc, th, vc, uc, st;
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const Curve c = curves[k];
    for (double theta : grid) {
      id.push_back(static_cast<double>(k));
      dc.push_back(c.d);
      nc.push_back(c.n);
      th.push_back(theta);
      vc.push_back(depth_form::squeezed_conditional<double>(theta, c.d, c.n, 0.0));
      uc.push_back(depth_form::antisqueezed_conditional<double>(theta, c.d, c.n, 0.0));
      st.push_back(std::isfinite(uc.back()) ? 1.0 : 0.0);
    }
  }
  SweepTable t;
  t.add_column("curve", std::move(id));
  t.add_column("d", std::move(dc));
  t.add_column("n", std::move(nc));
  t.add_column("theta", std::move(th));
  t.add_column("V_c", std::move(vc));
  t.add_column("U_c", std::move(uc));
  t.add_column("stable", std::move(st));
  t.metadata["figure"] = "Vc";
  t.metadata["epsilon"] = 0.0;
  return t;
}

/// V_u, V_c, U_c against θ at d = 5, ε = 0.05 and occupation n.
inline SweepTable figure_theta_panel(const std::string& name, double n) {
  InteractionParams p;
  p.d = 5.0;
  p.n = n;
  p.epsilon = 0.05;
  SweepTable t = variance_curves(theta_grid_with_boundary(p.d), p);
  t.metadata["figure"] = name;
  t.metadata["d"] = p.d;
  t.metadata["n"] = p.n;
  t.metadata["epsilon"] = p.epsilon;
  return t;
}

inline SweepTable figure_fig5() { return figure_theta_panel("fig5", 0.0); }
inline SweepTable figure_fig6() { return figure_theta_panel("fig6", unconditional_critical_occupation(5.0)); }

/// Optimized variances against optical depth at n = 0, ε = 0.05, with the
/// asymptotes 2/d, 2/√d and 1/ε.
inline SweepTable figure_var_od() {
  const double n = 0.0, epsilon = 0.05;
  const std::vector<double> depths = logspace(1.0, 1e4, 201);
  const auto cond = parallel_map(depths, [&](double d) { return theta_opt_conditional(d, n, epsilon); });
  std::vector<double> tc, vc, uc, tu, vu, uu, a1, a2, a3;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const double d = depths[i];
    const OptimumReport u = theta_opt_unconditional(d, n);
    tc.push_back(cond[i].theta_opt);
    vc.push_back(cond[i].v_opt);
    uc.push_back(cond[i].u_at_opt);
    tu.push_back(u.theta_opt);
    vu.push_back(u.v_opt);
    uu.push_back(u.u_at_opt);
    a1.push_back(2.0 / d);
    a2.push_back(2.0 / std::sqrt(d));
    a3.push_back(1.0 / epsilon);
  }
  SweepTable t;
  t.add_column("d", depths);
  t.add_column("theta_c_opt", std::move(tc));
  t.add_column("V_c", std::move(vc));
  t.add_column("U_c", std::move(uc));
  t.add_column("theta_u_opt", std::move(tu));
  t.add_column("V_u", std::move(vu));
  t.add_column("U_u", std::move(uu));
  t.add_column("asymptote_2_over_d", std::move(a1));
  t.add_column("asymptote_2_over_sqrt_d", std::move(a2));
  t.add_column("asymptote_1_over_epsilon", std::move(a3));
  t.metadata["figure"] = "varOD";
  t.metadata["n"] = n;
  t.metadata["epsilon"] = epsilon;
  return t;
}

inline SweepTable figure(const std::string& which) {
  if (which == "Vu") return figure_vu();
  if (which == "optTheta") return figure_opt_theta();
  if (which == "Vc") return figure_vc();
  if (which == "fig5") return figure_fig5();
  if (which == "fig6") return figure_fig6();
  if (which == "varOD") return figure_var_od();
  throw Error(ErrorCode::invalid_argument, "unknown figure '" + which + "'");
}

}  // namespace gsq::app
