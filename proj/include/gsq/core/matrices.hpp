#pragma once

#include "gsq/core/types.hpp"

namespace gsq {

/// Q = σ(M+R), P = 2σSσᵀ with R, S the imaginary/real parts of Σ j* jᵀ, and
/// per-monitored-channel A_k = Re j_k, B_k = Im j_k.
template <int Modes>
DriftDiffusion<Modes> build_matrices(const SystemSpec<Modes>& spec) {
  spec.validate();
  const cplx i(0.0, 1.0);

  ComplexMatrix<Modes> outer_sum = ComplexMatrix<Modes>::Zero();
  for (const auto& j : spec.jumps) outer_sum += j.conjugate() * j.transpose();

  const ComplexMatrix<Modes> r_c = -0.5 * i * (outer_sum - outer_sum.conjugate());
  const ComplexMatrix<Modes> s_c = 0.5 * (outer_sum + outer_sum.conjugate());
  const double scale = std::max(1.0, max_abs(outer_sum));
  require(max_abs(r_c.imag()) <= 1e-12 * scale && max_abs(s_c.imag()) <= 1e-12 * scale,
          ErrorCode::consistency_failure, "imaginary residue in R or S");

  DriftDiffusion<Modes> dd;
  const RealMatrix<Modes>& sigma = dd.symplectic;
  dd.drift = sigma * (spec.hamiltonian + r_c.real());
  dd.diffusion = 2.0 * sigma * s_c.real() * sigma.transpose();
  dd.diffusion = 0.5 * (dd.diffusion + dd.diffusion.transpose()).eval();

  for (int k = 0; k < spec.monitored; ++k) {
    const JumpVector<Modes>& j = spec.jumps[k];
    const JumpVector<Modes> a = 0.5 * (j + j.conjugate());
    const JumpVector<Modes> b = -0.5 * i * (j - j.conjugate());
    dd.meas_a.push_back(a.real());
    dd.meas_b.push_back(b.real());
  }
  return dd;
}

/// Right-hand side of the covariance equation. The conditional form is the
/// multi-channel Kalman–Bucy Riccati equation; the unconditional form drops
/// every measurement term and is the Lyapunov equation QΓ + ΓQᵀ + P.
template <int Modes>
RealMatrix<Modes> riccati_rhs(const RealMatrix<Modes>& gamma, const DriftDiffusion<Modes>& dd, bool conditional) {
  RealMatrix<Modes> out = dd.drift * gamma + gamma * dd.drift.transpose() + dd.diffusion;
  if (conditional) {
    const RealMatrix<Modes>& sigma = dd.symplectic;
    for (int k = 0; k < dd.monitored(); ++k) {
      const RealVector<Modes> sb = sigma * dd.meas_b[k];
      const RealVector<Modes> ga = gamma * dd.meas_a[k];
      // 2σB Aᵀ Γ + 2Γ A Bᵀσᵀ − 2σB Bᵀσᵀ − 2ΓA AᵀΓ
      out += 2.0 * (sb * ga.transpose() + ga * sb.transpose() - sb * sb.transpose() - ga * ga.transpose());
    }
  }
  return 0.5 * (out + out.transpose());
}

}  // namespace gsq
