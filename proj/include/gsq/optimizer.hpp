#pragma once

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "gsq/polynomial.hpp"
#include "gsq/single_mode.hpp"

namespace gsq {

enum class OptimumMethod { closed_form, cubic_root, numeric_scan };

constexpr std::string_view to_string(OptimumMethod m) {
  switch (m) {
    case OptimumMethod::closed_form: return "closed_form";
    case OptimumMethod::cubic_root: return "cubic_root";
    case OptimumMethod::numeric_scan: return "numeric_scan";
  }
  return "unknown";
}

struct OptimumReport {
  double theta_opt = 0.0;
  double v_opt = 0.0;
  double u_at_opt = 0.0;
  OptimumMethod method = OptimumMethod::closed_form;
  double residual = 0.0;  // |dV/dθ| at theta_opt
};

/// Unconditional stability boundary −½ arcsin(2/d); none for d < 2, where
/// γ + g sin(2θ)/2 stays positive for every θ.
inline std::optional<double> theta_critical(double d) {
  require(d > 0.0, ErrorCode::invalid_argument, "d must be positive");
  if (d < 2.0) return std::nullopt;
  return -0.5 * std::asin(2.0 / d);
}

// ---------------------------------------------------------------------------
// Unconditional optimum

/// Minimal unconditional variance 2[d√((2n+1)(2n+1+d)+1) − d − 2(2n+1)]/(d² − 4).
inline double optimal_unconditional_variance(double d, double n) {
  const double m = 2.0 * n + 1.0;
  return 2.0 * (d * std::sqrt(m * (m + d) + 1.0) - d - 2.0 * m) / (d * d - 4.0);
}

inline double theta_opt_unconditional_asymptotic(double d, double n) { return std::sqrt((2.0 * n + 1.0) / d); }

inline OptimumReport theta_opt_unconditional(double d, double n) {
  require(d > 0.0 && n >= 0.0, ErrorCode::invalid_argument, "need d > 0 and n >= 0");
  const double m = 2.0 * n + 1.0;
  OptimumReport r;
  r.method = OptimumMethod::closed_form;
  r.theta_opt = std::atan((std::sqrt(m * (m + d) + 1.0) - 1.0) / (m + d));
  // The closed form is 0/0 at d = 2.
  r.v_opt = std::abs(d - 2.0) > 1e-6 ? optimal_unconditional_variance(d, n)
                                     : depth_form::squeezed_unconditional<double>(r.theta_opt, d, n);
  r.u_at_opt = depth_form::antisqueezed_unconditional<double>(r.theta_opt, d, n);
  const double s2 = std::sin(2.0 * r.theta_opt), c2 = std::cos(2.0 * r.theta_opt);
  const double num = m + d * std::sin(r.theta_opt) * std::sin(r.theta_opt);
  const double den = 1.0 + d * s2 / 2.0;
  r.residual = std::abs((d * s2 * den - num * d * c2) / (den * den));
  return r;
}

// ---------------------------------------------------------------------------
// Conditional optimum

/// Stationarity condition of the conditional variance in x = tan θ,
/// c3 x³ + c2 x² + c1 x + c0 = 0 (highest power first).
inline std::array<double, 4> optimal_theta_cubic(double d, double n, double epsilon) {
  const double m = 2.0 * n + 1.0, e = epsilon, k = 1.0 - 2.0 * e;
  return {2.0 * k * (m + d * e),
          -(4.0 * m * m + e * (d * d - 16.0 * n * (n + 1.0)) + d * m * (2.0 - k * k)),
          -2.0 * k * (m - d * e),
          d * m * k * k};
}

inline double theta_opt_conditional_asymptotic(double d, double n) {
  return -std::numbers::pi / 4.0 + (2.0 * n + 1.0) / d;
}

/// |dV_c/dθ| by complex-step differentiation.
inline double conditional_slope(double theta, double d, double n, double epsilon) {
  constexpr double h = 1e-30;
  const std::complex<double> v =
      depth_form::squeezed_conditional<std::complex<double>>({theta, h}, d, n, epsilon);
  return std::abs(v.imag() / h);
}

struct ScanMinimum {
  double theta = 0.0;
  double value = 0.0;
};

inline constexpr int kScanPoints = 20001;
inline constexpr double kScanEdge = 1e-6;

/// Dense grid over [lo, hi] followed by Brent refinement around the best
/// grid point.
template <typename Fn>
ScanMinimum scan_minimum(Fn f, double lo, double hi, int points = kScanPoints) {
  require(hi > lo && points >= 3, ErrorCode::invalid_argument, "bad scan interval");
  const double step = (hi - lo) / (points - 1);
  int best = 0;
  double best_value = kInf;
  for (int i = 0; i < points; ++i) {
    const double v = f(lo + step * i);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = lo + step * std::max(0, best - 1);
  const double b = std::min(hi, lo + step * std::min(points - 1, best + 1));
  boost::uintmax_t iterations = 200;
  const auto [theta, value] =
      boost::math::tools::brent_find_minima(f, a, b, std::numeric_limits<double>::digits, iterations);
  if (value <= best_value) return {theta, value};
  return {lo + step * best, best_value};
}

/// Minimum of V_c(θ; d, n, ε) over θ ∈ [lo, hi]: real roots of the stationarity
/// cubic are candidates, a dense scan referees. The cubic answer is kept when
/// it matches the scan to 1e-6 rad or beats it.
inline OptimumReport minimize_conditional(double d, double n, double epsilon, double lo, double hi) {
  const auto v = [&](double theta) { return depth_form::squeezed_conditional<double>(theta, d, n, epsilon); };
  const ScanMinimum scan = scan_minimum(v, lo, hi);

  std::optional<ScanMinimum> cubic;
  const auto c = optimal_theta_cubic(d, n, epsilon);
  for (double x : poly::real_roots_cubic(c[0], c[1], c[2], c[3])) {
    const double theta = std::atan(x);
    if (theta < lo || theta > hi) continue;
    const double value = v(theta);
    if (std::isfinite(value) && (!cubic || value < cubic->value)) cubic = ScanMinimum{theta, value};
  }

  OptimumReport r;
  const bool use_cubic =
      cubic && (std::abs(cubic->theta - scan.theta) <= 1e-6 || cubic->value <= scan.value);
  if (use_cubic) {
    r.theta_opt = cubic->theta;
    r.v_opt = cubic->value;
    r.method = OptimumMethod::cubic_root;
  } else {
    r.theta_opt = scan.theta;
    r.v_opt = scan.value;
    r.method = OptimumMethod::numeric_scan;
  }
  r.u_at_opt = depth_form::antisqueezed_conditional<double>(r.theta_opt, d, n, epsilon);
  r.residual = conditional_slope(r.theta_opt, d, n, epsilon);
  return r;
}

inline OptimumReport theta_opt_conditional(double d, double n, double epsilon) {
  require(d > 0.0 && n >= 0.0, ErrorCode::invalid_argument, "need d > 0 and n >= 0");
  require(epsilon >= 0.0 && epsilon < 1.0, ErrorCode::invalid_argument, "epsilon must lie in [0, 1)");
  return minimize_conditional(d, n, epsilon, -std::numbers::pi / 2 + kScanEdge, std::numbers::pi / 2 - kScanEdge);
}

/// Dense-scan-only optimum, the independent referee of theta_opt_conditional.
inline ScanMinimum theta_opt_conditional_scan(double d, double n, double epsilon) {
  const auto v = [&](double theta) { return depth_form::squeezed_conditional<double>(theta, d, n, epsilon); };
  return scan_minimum(v, -std::numbers::pi / 2 + kScanEdge, std::numbers::pi / 2 - kScanEdge);
}

// ---------------------------------------------------------------------------
// Critical occupations and crossover depth

enum class OccupationKind { unconditional, conditional, conditional_stable };

struct CriticalOccupation {
  double n_crit = 0.0;
  double asymptotic = 0.0;  // large-d series for comparison
  OccupationKind kind = OccupationKind::unconditional;
};

/// Infimum of V_c(θ; ε = 0) over the unconditionally stable interval θ > θ_c.
inline double min_conditional_variance_stable(double d, double n) {
  const std::optional<double> tc = theta_critical(d);
  const double lo = tc ? *tc : -std::numbers::pi / 2 + kScanEdge;
  return minimize_conditional(d, n, 0.0, lo, std::numbers::pi / 2 - kScanEdge).v_opt;
}

/// Occupation above which no steady-state squeezing survives: exact
/// d(√2 − 1)/4 unconditionally; otherwise the root in n of min_θ V_c = 1
/// (ε = 0), unrestricted or restricted to θ > θ_c.
inline CriticalOccupation critical_occupation(double d, OccupationKind kind) {
  require(d > 0.0, ErrorCode::invalid_argument, "d must be positive");
  CriticalOccupation out;
  out.kind = kind;
  switch (kind) {
    case OccupationKind::unconditional:
      out.n_crit = d * (std::sqrt(2.0) - 1.0) / 4.0;
      out.asymptotic = out.n_crit;
      return out;
    case OccupationKind::conditional:
      out.asymptotic = 5.0 * d / 8.0 - 3.0 / (80.0 * d);
      break;
    case OccupationKind::conditional_stable:
      out.asymptotic = 0.5 + d / 2.0 - 7.0 / (16.0 * d);
      break;
  }
  const auto excess = [&](double n) {
    const double v = kind == OccupationKind::conditional ? theta_opt_conditional(d, n, 0.0).v_opt
                                                         : min_conditional_variance_stable(d, n);
    return v - 1.0;
  };
  double hi = std::max(1.0, d);
  while (excess(hi) <= 0.0) {
    hi *= 2.0;
    require(hi < 1e12, ErrorCode::no_convergence, "could not bracket the critical occupation");
  }
  const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-9 * std::max(1.0, std::abs(a)); };
  const auto [a, b] = boost::math::tools::bisect(excess, 0.0, hi, tol);
  out.n_crit = 0.5 * (a + b);
  return out;
}

/// Optical depth (2n+1)/ε up to which feedback-stabilized conditional squeezing
/// keeps its 1/d scaling; there U_c ≈ √2/ε.
inline double d_star(double n, double epsilon) {
  require(epsilon > 0.0, ErrorCode::invalid_argument, "epsilon must be positive");
  require(n >= 0.0, ErrorCode::invalid_argument, "n must be non-negative");
  return (2.0 * n + 1.0) / epsilon;
}

}  // namespace gsq
