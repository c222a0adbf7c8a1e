#pragma once

#include <algorithm>
#include <cmath>

#include "gsq/core/operators.hpp"
#include "gsq/single_mode.hpp"

namespace gsq {

/// Gains of the feedback Hamiltonian terms F₁ = ξ₁P and F₂ = ξ₂X driven by
/// the two homodyne photocurrents.
struct FeedbackGains {
  double xi1 = 0.0;
  double xi2 = 0.0;

  void validate() const {
    require(std::isfinite(xi1) && std::isfinite(xi2), ErrorCode::invalid_argument, "gains must be finite");
  }
};

namespace detail {

// One Lyapunov branch: V(ξ) = (c0 − 2 b k ξ + 2ξ²) / (D − 2 a k ξ).
struct FeedbackBranch {
  double a, b, k, c0, d;

  double rate(double xi) const { return d - 2.0 * a * k * xi; }
  double value(double xi) const { return (c0 - 2.0 * b * k * xi + 2.0 * xi * xi) / rate(xi); }
};

inline FeedbackBranch squeezed_branch(const InteractionParams& p, const Rates& r) {
  const double a = p.alpha(), b = p.beta();
  return {a, b, std::sqrt(2.0 * r.g * (1.0 - p.epsilon)), r.gamma * (2.0 * p.n + 1.0) + r.g * b * b,
          r.gamma + r.g * a * b};
}

inline FeedbackBranch antisqueezed_branch(const InteractionParams& p, const Rates& r) {
  const double a = p.alpha(), b = p.beta();
  return {b, a, std::sqrt(2.0 * r.g * p.epsilon), r.gamma * (2.0 * p.n + 1.0) + r.g * a * a, r.gamma + r.g * a * b};
}

// Root of 2ak ξ² − 2Dξ + (bkD − ak c0) = 0 with a positive rate left over.
inline double optimal_branch_gain(const FeedbackBranch& br, const char* which) {
  const double ak = br.a * br.k;
  const double disc = br.d * br.d - 2.0 * ak * (br.b * br.k * br.d - ak * br.c0);
  require(disc > 0.0, ErrorCode::not_stabilizable, std::string("no stabilizing gain for the ") + which + " branch");
  const double den = br.d + std::sqrt(disc);
  require(den != 0.0, ErrorCode::not_stabilizable, std::string("no stabilizing gain for the ") + which + " branch");
  const double xi = (br.b * br.k * br.d - ak * br.c0) / den;
  require(br.rate(xi) > 0.0, ErrorCode::not_stabilizable,
          std::string("no stabilizing gain for the ") + which + " branch");
  return xi;
}

}  // namespace detail

/// Steady variances under Markovian photocurrent feedback (linear Lyapunov
/// equations). Throws FeedbackUnstable when an effective decay rate is ≤ 0.
inline SteadyResult feedback_steady(const InteractionParams& params, const Rates& rates, const FeedbackGains& gains) {
  detail::require_phase_zero(params.phi);
  gains.validate();
  const auto v = detail::squeezed_branch(params, rates);
  const auto u = detail::antisqueezed_branch(params, rates);
  require(v.rate(gains.xi1) > 0.0, ErrorCode::feedback_unstable, "squeezed quadrature has non-positive decay rate");
  require(u.rate(gains.xi2) > 0.0, ErrorCode::feedback_unstable, "antisqueezed quadrature has non-positive decay rate");
  SteadyResult r;
  r.v_squeezed = v.value(gains.xi1);
  r.u_antisqueezed = u.value(gains.xi2);
  return r;
}

inline SteadyResult feedback_steady(const InteractionParams& params, const FeedbackGains& gains) {
  params.validate();
  return feedback_steady(params, rates_of(params), gains);
}

struct OptimalFeedback {
  FeedbackGains gains;
  SteadyResult steady;
  double residual = 0.0;  // max relative deviation from the conditional variances
};

inline constexpr double kFeedbackMatchTol = 1e-8;

/// Gains minimizing V_fb over ξ₁ and U_fb over ξ₂. The minima coincide with the
/// conditional variances; a mismatch beyond 1e-8 throws ConsistencyFailure.
inline OptimalFeedback optimal_gains(const InteractionParams& params, const Rates& rates) {
  detail::require_phase_zero(params.phi);
  OptimalFeedback out;
  out.gains.xi1 = detail::optimal_branch_gain(detail::squeezed_branch(params, rates), "squeezed");
  out.gains.xi2 = detail::optimal_branch_gain(detail::antisqueezed_branch(params, rates), "antisqueezed");
  out.steady = feedback_steady(params, rates, out.gains);
  const SteadyResult cond = conditional_steady(params, rates);
  const auto rel = [](double x, double ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); };
  out.residual = std::max(rel(out.steady.v_squeezed, cond.v_squeezed), rel(out.steady.u_antisqueezed, cond.u_antisqueezed));
  require(out.residual <= kFeedbackMatchTol, ErrorCode::consistency_failure,
          "optimal feedback variances differ from the conditional ones");
  return out;
}

inline OptimalFeedback optimal_gains(const InteractionParams& params) {
  params.validate();
  return optimal_gains(params, rates_of(params));
}

/// Engine spec of the feedback master equation: Hamiltonian
/// ½[(√(g(1−ε))F₁ + i√(gε)F₂)s + h.c.], unmonitored jumps √(g(1−ε))s − iF₁ and
/// i(√(gε)s − F₂), and the thermal channels.
inline SystemSpec<1> feedback_spec(const InteractionParams& params, const Rates& rates, const FeedbackGains& gains) {
  gains.validate();
  const cplx i(0.0, 1.0);
  const double c1 = std::sqrt(rates.g * (1.0 - params.epsilon));
  const double c2 = std::sqrt(rates.g * params.epsilon);
  const JumpVector<1> s = probe_operator(params.theta);
  const JumpVector<1> f1 = gains.xi1 * ops::p<1>(0);
  const JumpVector<1> f2 = gains.xi2 * ops::x<1>(0);

  const ComplexMatrix<1> y = 0.5 * (c1 * ops::product<1>(f1, s) + c1 * ops::product<1>(ops::adjoint<1>(s), f1) +
                                    i * c2 * ops::product<1>(f2, s) - i * c2 * ops::product<1>(ops::adjoint<1>(s), f2));
  SystemSpec<1> spec;
  spec.hamiltonian = ops::hamiltonian_matrix<1>(y);
  if (params.epsilon < 1.0) spec.jumps.push_back(c1 * s - i * f1);
  if (params.epsilon > 0.0) spec.jumps.push_back(i * (c2 * s - f2));
  append_thermal_channels<1>(spec.jumps, 0, rates.gamma, params.n);
  spec.monitored = 0;
  return spec;
}

inline SystemSpec<1> feedback_spec(const InteractionParams& params, const FeedbackGains& gains) {
  params.validate();
  return feedback_spec(params, rates_of(params), gains);
}

}  // namespace gsq
