#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "gsq/core/operators.hpp"
#include "gsq/core/types.hpp"
#include "gsq/parallel.hpp"
#include "gsq/sweep_table.hpp"

namespace gsq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Experiment knobs of one probed mode: interaction angle θ (α = cos θ,
/// β = sin θ), beamsplitter reflectivity ε, local-oscillator phase φ, optical
/// depth d, thermal occupation n and decay rate γ. The probe coupling is g = dγ.
struct InteractionParams {
  double theta = 0.0;
  double epsilon = 0.0;
  double phi = 0.0;
  double d = 1.0;
  double n = 0.0;
  double gamma = 1.0;

  double alpha() const { return std::cos(theta); }
  double beta() const { return std::sin(theta); }
  double coupling() const { return d * gamma; }

  void validate() const {
    require(std::isfinite(theta) && std::abs(theta) < std::numbers::pi / 2, ErrorCode::invalid_argument,
            "theta must lie in (-pi/2, pi/2)");
    require(epsilon >= 0.0 && epsilon <= 1.0, ErrorCode::invalid_argument, "epsilon must lie in [0, 1]");
    require(std::isfinite(phi), ErrorCode::invalid_argument, "phi must be finite");
    require(d > 0.0 && std::isfinite(d), ErrorCode::invalid_argument, "d must be positive");
    require(n >= 0.0 && std::isfinite(n), ErrorCode::invalid_argument, "n must be non-negative");
    require(gamma > 0.0 && std::isfinite(gamma), ErrorCode::invalid_argument, "gamma must be positive");
  }
};

/// Probe and decay rates in Hz. Usually derived from InteractionParams; kept
/// separate so limits such as γ = 0 or g = 0 can be expressed directly.
struct Rates {
  double g = 1.0;
  double gamma = 1.0;
};

inline Rates rates_of(const InteractionParams& p) { return {p.coupling(), p.gamma}; }

struct SteadyResult {
  double v_squeezed = 0.0;
  double u_antisqueezed = 0.0;
  double c_cov = 0.0;
  bool stable = true;
};

namespace detail {

/// Non-negative root of −a x² − b x + c = 0 (a, c ≥ 0), evaluated without
/// cancellation. a = 0 gives c/b for b > 0 and +∞ (no bounded root) otherwise.
template <typename T>
T stationary_root(T a, T b, T c, T disc) {
  using std::real;
  using std::sqrt;
  const T root = sqrt(disc);
  if (real(b) >= 0.0) {
    if (real(c) == 0.0) return T(0.0);
    return T(2.0) * c / (b + root);
  }
  if (real(a) <= 0.0) return T(kInf);
  return (root - b) / (T(2.0) * a);
}

inline void require_phase_zero(double phi) {
  require(phi == 0.0, ErrorCode::precondition_violated,
          "closed forms assume the optimal local-oscillator phase phi = 0");
}

}  // namespace detail

/// Jump vector of s = (αX + iβP)/√2 on a single mode.
inline JumpVector<1> probe_operator(double theta) {
  return (std::cos(theta) * ops::x<1>(0) + cplx(0.0, std::sin(theta)) * ops::p<1>(0)) / std::sqrt(2.0);
}

/// Thermal bath channels √(γ(n+1)) a and √(γn) a†; zero-amplitude channels are omitted.
template <int Modes>
void append_thermal_channels(std::vector<JumpVector<Modes>>& jumps, int mode, double gamma, double n) {
  if (gamma * (n + 1.0) > 0.0) jumps.push_back(std::sqrt(gamma * (n + 1.0)) * ops::annihilation<Modes>(mode));
  if (gamma * n > 0.0) jumps.push_back(std::sqrt(gamma * n) * ops::creation<Modes>(mode));
}

/// Homodyne channels √(g(1−ε)) L e^{iφ} and i√(gε) L e^{iφ}; a channel with
/// zero weight (ε ∈ {0, 1}) is omitted. Returns the number of channels added.
template <int Modes>
int append_homodyne_channels(std::vector<JumpVector<Modes>>& jumps, const JumpVector<Modes>& op, double g,
                             double epsilon, double phi) {
  const cplx phase = std::polar(1.0, phi);
  int added = 0;
  if (epsilon < 1.0) {
    jumps.push_back(std::sqrt(g * (1.0 - epsilon)) * phase * op);
    ++added;
  }
  if (epsilon > 0.0) {
    jumps.push_back(cplx(0.0, 1.0) * std::sqrt(g * epsilon) * phase * op);
    ++added;
  }
  return added;
}

/// Engine spec of the single-mode stochastic master equation. The homodyne
/// channels come first and are monitored when `conditional` is set; with
/// `conditional` false they remain as plain dissipation.
inline SystemSpec<1> make_spec(const InteractionParams& params, const Rates& rates, bool conditional) {
  require(rates.g >= 0.0 && rates.gamma >= 0.0, ErrorCode::invalid_argument, "rates must be non-negative");
  SystemSpec<1> spec;
  const int measured = append_homodyne_channels<1>(spec.jumps, probe_operator(params.theta), rates.g,
                                                   params.epsilon, params.phi);
  append_thermal_channels<1>(spec.jumps, 0, rates.gamma, params.n);
  spec.monitored = conditional ? measured : 0;
  return spec;
}

inline SystemSpec<1> make_spec(const InteractionParams& params, bool conditional) {
  params.validate();
  return make_spec(params, rates_of(params), conditional);
}

/// (dV/dt, dU/dt) of the conditional variances at C = 0, φ = 0.
inline std::pair<double, double> conditional_rhs(double v, double u, const InteractionParams& params,
                                                 const Rates& rates) {
  detail::require_phase_zero(params.phi);
  const double a = params.alpha(), b = params.beta(), e = params.epsilon;
  const double g = rates.g, gm = rates.gamma, thermal = gm * (2.0 * params.n + 1.0);
  const double dv = -(gm - g * (1.0 - 2.0 * e) * a * b) * v - g * (1.0 - e) * a * a * v * v + thermal + g * e * b * b;
  const double du = -(gm + g * (1.0 - 2.0 * e) * a * b) * u - g * e * b * b * u * u + thermal + g * (1.0 - e) * a * a;
  return {dv, du};
}

inline std::pair<double, double> conditional_rhs(double v, double u, const InteractionParams& params) {
  return conditional_rhs(v, u, params, rates_of(params));
}

/// Conditional squeezed variance in steady state, as a function of θ so that
/// it can be differentiated by complex step.
template <typename T>
T conditional_v(T theta, double epsilon, double n, const Rates& rates) {
  using std::cos;
  using std::sin;
  const T a = cos(theta), b = sin(theta);
  const double g = rates.g, gm = rates.gamma, e = epsilon, m = 2.0 * n + 1.0;
  const T quad = g * (1.0 - e) * a * a;
  const T lin = gm - g * (1.0 - 2.0 * e) * a * b;
  const T cst = gm * m + g * e * b * b;
  const T disc = (gm - g * a * b) * (gm - g * a * b) + 4.0 * gm * g * a * (m * (1.0 - e) * a + e * b);
  return detail::stationary_root<T>(quad, lin, cst, disc);
}

template <typename T>
T conditional_u(T theta, double epsilon, double n, const Rates& rates) {
  using std::cos;
  using std::sin;
  const T a = cos(theta), b = sin(theta);
  const double g = rates.g, gm = rates.gamma, e = epsilon, m = 2.0 * n + 1.0;
  const T quad = g * e * b * b;
  const T lin = gm + g * (1.0 - 2.0 * e) * a * b;
  const T cst = gm * m + g * (1.0 - e) * a * a;
  const T disc = (gm + g * a * b) * (gm + g * a * b) + 4.0 * gm * g * b * e * (m * b - a);
  return detail::stationary_root<T>(quad, lin, cst, disc);
}

/// Steady conditional variances. When the antisqueezed branch has no bounded
/// solution (ε = 0 and θ ≤ θ_c, or the mirror case ε = 1) the unbounded
/// variance is +∞ and `stable` is false; the other variance is still returned.
inline SteadyResult conditional_steady(const InteractionParams& params, const Rates& rates) {
  detail::require_phase_zero(params.phi);
  SteadyResult r;
  r.v_squeezed = conditional_v<double>(params.theta, params.epsilon, params.n, rates);
  r.u_antisqueezed = conditional_u<double>(params.theta, params.epsilon, params.n, rates);
  r.stable = std::isfinite(r.v_squeezed) && std::isfinite(r.u_antisqueezed);
  return r;
}

inline SteadyResult conditional_steady(const InteractionParams& params) {
  params.validate();
  return conditional_steady(params, rates_of(params));
}

/// Effective decay rate γ + gαβ of the unconditional dynamics.
inline double unconditional_rate(double theta, const Rates& rates) {
  return rates.gamma + rates.g * std::cos(theta) * std::sin(theta);
}

inline SteadyResult unconditional_steady(const InteractionParams& params, const Rates& rates) {
  const double rate = unconditional_rate(params.theta, rates);
  require(rate > 0.0, ErrorCode::unstable_regime, "unconditional dynamics is unstable (gamma + g*alpha*beta <= 0)");
  const double a = params.alpha(), b = params.beta(), thermal = rates.gamma * (2.0 * params.n + 1.0);
  SteadyResult r;
  r.v_squeezed = (rates.g * b * b + thermal) / rate;
  r.u_antisqueezed = (rates.g * a * a + thermal) / rate;
  return r;
}

inline SteadyResult unconditional_steady(const InteractionParams& params) {
  params.validate();
  return unconditional_steady(params, rates_of(params));
}

/// Variances in terms of (θ, d) alone, valid because only g/γ = d enters.
namespace depth_form {

/// V_u = (2n+1 + d sin²θ) / (1 + d sin(2θ)/2); +∞ outside the stable region.
template <typename T>
T squeezed_unconditional(T theta, double d, double n) {
  using std::real;
  using std::sin;
  const T den = 1.0 + d * sin(2.0 * theta) / 2.0;
  if (real(den) <= 0.0) return T(kInf);
  return (2.0 * n + 1.0 + d * sin(theta) * sin(theta)) / den;
}

template <typename T>
T antisqueezed_unconditional(T theta, double d, double n) {
  using std::cos;
  using std::real;
  using std::sin;
  const T den = 1.0 + d * sin(2.0 * theta) / 2.0;
  if (real(den) <= 0.0) return T(kInf);
  return (2.0 * n + 1.0 + d * cos(theta) * cos(theta)) / den;
}

/// Conditional squeezed variance as the positive root of
/// (1−ε)V² − [(1−2ε)tanθ − w]V − [(2n+1)w + ε tan²θ] = 0, w = 1/(d cos²θ),
/// with the discriminant in its (w − tanθ)² + 4[(2n+1)(1−ε) + ε tanθ]w form.
template <typename T>
T squeezed_conditional(T theta, double d, double n, double epsilon) {
  using std::cos;
  using std::real;
  using std::sqrt;
  using std::tan;
  const double m = 2.0 * n + 1.0, e = epsilon;
  const T t = tan(theta);
  const T w = 1.0 / (d * cos(theta) * cos(theta));
  const T lin = (1.0 - 2.0 * e) * t - w;
  const T cst = m * w + e * t * t;
  const T disc = (w - t) * (w - t) + 4.0 * (m * (1.0 - e) + e * t) * w;
  const T root = sqrt(disc);
  if (real(lin) < 0.0) return 2.0 * cst / (root - lin);
  if (e >= 1.0) return T(kInf);
  return (lin + root) / (2.0 * (1.0 - e));
}

/// Conditional antisqueezed variance from the rate form with γ = 1, g = d.
template <typename T>
T antisqueezed_conditional(T theta, double d, double n, double epsilon) {
  return conditional_u<T>(theta, epsilon, n, Rates{d, 1.0});
}

}  // namespace depth_form

/// V_u, V_c, U_c on a θ grid with a `stable` flag marking unconditional
/// stability (γ + gαβ > 0). Unbounded variances are stored as +∞.
inline SweepTable variance_curves(const std::vector<double>& theta_grid, const InteractionParams& params) {
  detail::require_phase_zero(params.phi);
  struct Row {
    double vu, vc, uc, stable;
  };
  const auto rows = parallel_map(theta_grid, [&](double theta) {
    require(std::abs(theta) < std::numbers::pi / 2, ErrorCode::invalid_argument, "theta outside (-pi/2, pi/2)");
    const bool stable = 1.0 + params.d * std::sin(2.0 * theta) / 2.0 > 0.0;
    return Row{depth_form::squeezed_unconditional<double>(theta, params.d, params.n),
               depth_form::squeezed_conditional<double>(theta, params.d, params.n, params.epsilon),
               depth_form::antisqueezed_conditional<double>(theta, params.d, params.n, params.epsilon),
               stable ? 1.0 : 0.0};
  });
  std::vector<double> vu, vc, uc, st;
  for (const Row& r : rows) {
    vu.push_back(r.vu);
    vc.push_back(r.vc);
    uc.push_back(r.uc);
    st.push_back(r.stable);
  }
  SweepTable table;
  table.add_column("theta", theta_grid);
  table.add_column("V_u", std::move(vu));
  table.add_column("V_c", std::move(vc));
  table.add_column("U_c", std::move(uc));
  table.add_column("stable", std::move(st));
  return table;
}

/// Squeezed variance after a QND pulse of duration τ (no decay, ε = 0):
/// V_c(τ) = 1/(1 + gτ). With g = dγ this is the familiar 1/(1 + κ²), κ² = dη, η = γτ.
inline double qnd_pulse_variance(double g, double tau) {
  require(g >= 0.0 && tau >= 0.0, ErrorCode::invalid_argument, "g and tau must be non-negative");
  return 1.0 / (1.0 + g * tau);
}

}  // namespace gsq
