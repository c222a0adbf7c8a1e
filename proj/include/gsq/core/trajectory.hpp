#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "gsq/core/evolve.hpp"

namespace gsq {

/// One Euler–Maruyama step of ds = Qs dt + Σ_k (ΓA_k − σB_k) dW_k.
template <int Modes>
RealVector<Modes> euler_maruyama_step(const RealVector<Modes>& s, const RealMatrix<Modes>& gamma,
                                      const DriftDiffusion<Modes>& dd, double dt, std::span<const double> dw) {
  require(static_cast<int>(dw.size()) == dd.monitored(), ErrorCode::dimension_mismatch,
          "one Wiener increment per monitored channel");
  RealVector<Modes> next = s + dt * (dd.drift * s);
  for (int k = 0; k < dd.monitored(); ++k) {
    next += (gamma * dd.meas_a[k] - dd.symplectic * dd.meas_b[k]) * dw[k];
  }
  return next;
}

template <int Modes>
struct Trajectory {
  std::vector<double> times;
  std::vector<RealVector<Modes>> displacements;
  std::vector<RealMatrix<Modes>> covariances;  // empty unless requested
};

struct TrajectoryOptions {
  std::size_t sample_every = 1;
  bool record_covariance = false;
  double divergence_threshold = kDivergenceThreshold;
};

/// Conditional displacement path for one measurement record. Γ is co-integrated
/// with RK4 on the same grid; the record is driven by a std::mt19937_64 seeded
/// with `seed`, so equal seeds give bit-identical paths.
template <int Modes>
Trajectory<Modes> simulate_trajectory(const SystemSpec<Modes>& spec, const GaussianState<Modes>& state0,
                                      double duration, double dt, std::uint64_t seed,
                                      const TrajectoryOptions& options = {}) {
  require(dt > 0.0, ErrorCode::invalid_argument, "dt must be positive");
  require(duration >= 0.0, ErrorCode::invalid_argument, "duration must be >= 0");
  const DriftDiffusion<Modes> dd = build_matrices(spec);
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  const std::size_t every = std::max<std::size_t>(1, options.sample_every);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_dt = std::sqrt(dt);
  std::vector<double> dw(static_cast<std::size_t>(dd.monitored()));

  Trajectory<Modes> out;
  RealVector<Modes> s = state0.displacement;
  RealMatrix<Modes> gamma = state0.covariance;
  auto record = [&](double t) {
    out.times.push_back(t);
    out.displacements.push_back(s);
    if (options.record_covariance) out.covariances.push_back(gamma);
  };
  record(0.0);

  for (std::size_t k = 1; k <= steps; ++k) {
    for (double& w : dw) w = sqrt_dt * normal(rng);
    s = euler_maruyama_step<Modes>(s, gamma, dd, dt, dw);
    gamma = rk4_step<Modes>(gamma, dd, dt, true);
    const double t = static_cast<double>(k) * dt;
    detail::check_divergence<Modes>(gamma, t, options.divergence_threshold);
    if (!s.allFinite() || max_abs(s) > options.divergence_threshold) {
      throw Error(ErrorCode::divergence_detected, "displacement diverged");
    }
    if (k % every == 0 || k == steps) record(t);
  }
  return out;
}

}  // namespace gsq
