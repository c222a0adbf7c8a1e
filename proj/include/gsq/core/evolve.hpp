#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "gsq/core/matrices.hpp"

namespace gsq {

inline constexpr double kDivergenceThreshold = 1e9;

template <int Modes>
RealMatrix<Modes> rk4_step(const RealMatrix<Modes>& gamma, const DriftDiffusion<Modes>& dd, double dt,
                           bool conditional) {
  const RealMatrix<Modes> k1 = riccati_rhs<Modes>(gamma, dd, conditional);
  const RealMatrix<Modes> k2 = riccati_rhs<Modes>(gamma + 0.5 * dt * k1, dd, conditional);
  const RealMatrix<Modes> k3 = riccati_rhs<Modes>(gamma + 0.5 * dt * k2, dd, conditional);
  const RealMatrix<Modes> k4 = riccati_rhs<Modes>(gamma + dt * k3, dd, conditional);
  RealMatrix<Modes> next = gamma + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return 0.5 * (next + next.transpose());
}

namespace detail {

template <int Modes>
void check_divergence(const RealMatrix<Modes>& gamma, double t, double threshold) {
  if (!gamma.allFinite() || max_abs(gamma) > threshold) {
    std::ostringstream msg;
    msg << "covariance exceeded " << threshold << " at t=" << t;
    throw Error(ErrorCode::divergence_detected, msg.str());
  }
}

}  // namespace detail

template <int Modes>
struct CovarianceTrajectory {
  std::vector<double> times;
  std::vector<RealMatrix<Modes>> covariances;
  /// max |Γ(t_k) - Γ(t_{k-1})| for every sampled step; 0 for the initial sample.
  std::vector<double> step_change;
};

struct EvolveOptions {
  std::size_t sample_every = 1;
  double divergence_threshold = kDivergenceThreshold;
};

/// Fixed-step RK4 integration of the covariance equation, sampled at step
/// boundaries (every `sample_every` steps, plus the final step).
template <int Modes>
CovarianceTrajectory<Modes> evolve_covariance(const SystemSpec<Modes>& spec, const RealMatrix<Modes>& gamma0,
                                              double duration, double dt, bool conditional,
                                              const EvolveOptions& options = {}) {
  require(dt > 0.0 && std::isfinite(dt), ErrorCode::invalid_argument, "dt must be positive");
  require(duration >= 0.0 && std::isfinite(duration), ErrorCode::invalid_argument, "duration must be >= 0");
  require(asymmetry(gamma0) < 1e-10, ErrorCode::invalid_argument, "initial covariance is not symmetric");
  const DriftDiffusion<Modes> dd = build_matrices(spec);
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  const std::size_t every = std::max<std::size_t>(1, options.sample_every);

  CovarianceTrajectory<Modes> out;
  out.times.push_back(0.0);
  out.covariances.push_back(gamma0);
  out.step_change.push_back(0.0);

  RealMatrix<Modes> gamma = gamma0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const RealMatrix<Modes> next = rk4_step<Modes>(gamma, dd, dt, conditional);
    const double change = max_abs(next - gamma);
    gamma = next;
    const double t = static_cast<double>(k) * dt;
    detail::check_divergence<Modes>(gamma, t, options.divergence_threshold);
    if (k % every == 0 || k == steps) {
      out.times.push_back(t);
      out.covariances.push_back(gamma);
      out.step_change.push_back(change);
    }
  }
  return out;
}

struct SteadyOptions {
  double tol = 1e-12;
  /// Step size; 0 selects 1e-2 / (largest rate of the system).
  double dt = 0.0;
  /// Give up after this much simulated time; 0 selects max_steps * dt.
  double max_time = 0.0;
  std::size_t max_steps = 20'000'000;
  double divergence_threshold = kDivergenceThreshold;
  /// Quadrature indices whose covariance block decides convergence and
  /// divergence; empty means all. Use it for an invariant subspace whose
  /// complement grows without bound.
  std::vector<int> watch;
};

template <int Modes>
struct SteadyCovariance {
  RealMatrix<Modes> covariance;
  double residual = 0.0;  // max |Γ̇| at the returned covariance
  double time = 0.0;
  std::size_t steps = 0;
};

namespace detail {

template <int Modes>
double watched_max(const RealMatrix<Modes>& m, const std::vector<int>& watch) {
  if (watch.empty()) return max_abs(m);
  double out = 0.0;
  for (int i : watch) {
    for (int j : watch) out = std::max(out, std::abs(m(i, j)));
  }
  return out;
}

}  // namespace detail

/// Long-time limit of the covariance equation from Γ0 = I. Converged once
/// max|Γ̇| < tol · rate · max|Γ|, rate being the system's characteristic rate.
/// With `watch` set, both maxima and the divergence test run over the watched
/// block only; the rest must merely stay finite.
template <int Modes>
SteadyCovariance<Modes> steady_covariance(const SystemSpec<Modes>& spec, bool conditional,
                                          const SteadyOptions& options = {}) {
  require(options.tol > 0.0, ErrorCode::invalid_argument, "tol must be positive");
  const DriftDiffusion<Modes> dd = build_matrices(spec);
  const double rate = dd.characteristic_rate();
  const double dt = options.dt > 0.0 ? options.dt : 1e-2 / rate;
  std::size_t max_steps = options.max_steps;
  if (options.max_time > 0.0) max_steps = static_cast<std::size_t>(std::ceil(options.max_time / dt));

  for (int i : options.watch) {
    require(i >= 0 && i < 2 * Modes, ErrorCode::dimension_mismatch, "watched index out of range");
  }

  RealMatrix<Modes> gamma = RealMatrix<Modes>::Identity();
  for (std::size_t k = 0; k <= max_steps; ++k) {
    const RealMatrix<Modes> deriv = riccati_rhs<Modes>(gamma, dd, conditional);
    const double residual = detail::watched_max<Modes>(deriv, options.watch);
    if (residual < options.tol * rate * detail::watched_max<Modes>(gamma, options.watch)) {
      return {gamma, residual, static_cast<double>(k) * dt, k};
    }
    gamma = rk4_step<Modes>(gamma, dd, dt, conditional);
    const double t = static_cast<double>(k + 1) * dt;
    if (options.watch.empty()) {
      detail::check_divergence<Modes>(gamma, t, options.divergence_threshold);
    } else if (!gamma.allFinite() || detail::watched_max<Modes>(gamma, options.watch) > options.divergence_threshold) {
      std::ostringstream msg;
      msg << "watched covariance block diverged at t=" << t;
      throw Error(ErrorCode::divergence_detected, msg.str());
    }
  }
  std::ostringstream msg;
  msg << "no steady state within t=" << static_cast<double>(max_steps) * dt;
  throw Error(ErrorCode::no_convergence, msg.str());
}

}  // namespace gsq
