#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "gsq/error.hpp"

namespace gsq {

using cplx = std::complex<double>;

template <int Modes>
using RealVector = Eigen::Matrix<double, 2 * Modes, 1>;
template <int Modes>
using RealMatrix = Eigen::Matrix<double, 2 * Modes, 2 * Modes>;
template <int Modes>
using JumpVector = Eigen::Matrix<cplx, 2 * Modes, 1>;
template <int Modes>
using ComplexMatrix = Eigen::Matrix<cplx, 2 * Modes, 2 * Modes>;

/// Block-diagonal symplectic form, one [[0,1],[-1,0]] block per mode, in the
/// quadrature ordering (x1, p1, ..., xa, pa).
template <int Modes>
RealMatrix<Modes> symplectic_form() {
  RealMatrix<Modes> sigma = RealMatrix<Modes>::Zero();
  for (int k = 0; k < Modes; ++k) {
    sigma(2 * k, 2 * k + 1) = 1.0;
    sigma(2 * k + 1, 2 * k) = -1.0;
  }
  return sigma;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
double asymmetry(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.transpose());
}

/// A multimode Gaussian open system: H = r^T M r / 2, jump operators
/// J_i = r^T j_i, and the first `monitored` channels under homodyne detection.
template <int Modes>
struct SystemSpec {
  static constexpr int num_modes = Modes;
  static constexpr int dim = 2 * Modes;

  RealMatrix<Modes> hamiltonian = RealMatrix<Modes>::Zero();
  std::vector<JumpVector<Modes>> jumps;
  int monitored = 0;

  void validate() const {
    const double scale = std::max(1.0, max_abs(hamiltonian));
    require(hamiltonian.allFinite(), ErrorCode::invalid_argument, "hamiltonian has non-finite entries");
    require(asymmetry(hamiltonian) <= 1e-12 * scale, ErrorCode::non_hermitian_input,
            "hamiltonian matrix is not symmetric");
    require(monitored >= 0 && monitored <= static_cast<int>(jumps.size()), ErrorCode::invalid_argument,
            "monitored channel count must lie in [0, number of jumps]");
    for (const auto& j : jumps) {
      require(j.allFinite(), ErrorCode::invalid_argument, "jump vector has non-finite entries");
    }
  }
};

/// Spec expressed in new quadratures r' = T r for an orthogonal symplectic T:
/// M' = T M Tᵀ and j' = T j.
template <int Modes>
SystemSpec<Modes> transform_spec(const SystemSpec<Modes>& spec, const RealMatrix<Modes>& t) {
  const RealMatrix<Modes> sigma = symplectic_form<Modes>();
  require(max_abs(t * t.transpose() - RealMatrix<Modes>::Identity()) < 1e-12 &&
              max_abs(t * sigma * t.transpose() - sigma) < 1e-12,
          ErrorCode::invalid_argument, "basis change must be orthogonal and symplectic");
  SystemSpec<Modes> out;
  out.hamiltonian = t * spec.hamiltonian * t.transpose();
  out.hamiltonian = 0.5 * (out.hamiltonian + out.hamiltonian.transpose()).eval();
  for (const auto& j : spec.jumps) out.jumps.push_back(t.template cast<cplx>() * j);
  out.monitored = spec.monitored;
  return out;
}

/// Displacement vector and covariance matrix, Γ_ij = <{r_i, r_j}> - 2 s_i s_j.
/// The vacuum has Γ = I, so diagonal entries are variances in shot-noise units.
template <int Modes>
struct GaussianState {
  RealVector<Modes> displacement = RealVector<Modes>::Zero();
  RealMatrix<Modes> covariance = RealMatrix<Modes>::Identity();

  static GaussianState vacuum() { return {}; }

  bool is_symmetric(double tol = 1e-10) const { return asymmetry(covariance) < tol; }

  /// Smallest eigenvalue of Γ + iσ (the Hermitian uncertainty matrix).
  double min_uncertainty_eigenvalue() const {
    const ComplexMatrix<Modes> h =
        covariance.template cast<cplx>() + cplx(0.0, 1.0) * symplectic_form<Modes>().template cast<cplx>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Modes>> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  bool is_physical(double tol = 1e-9) const {
    return is_symmetric() && min_uncertainty_eigenvalue() >= -tol * std::max(1.0, max_abs(covariance));
  }
};

/// Real drift/diffusion data of the moment equations.
template <int Modes>
struct DriftDiffusion {
  RealMatrix<Modes> drift = RealMatrix<Modes>::Zero();      // Q
  RealMatrix<Modes> diffusion = RealMatrix<Modes>::Zero();  // P
  std::vector<RealVector<Modes>> meas_a;                     // A_k, one per monitored channel
  std::vector<RealVector<Modes>> meas_b;                     // B_k
  RealMatrix<Modes> symplectic = symplectic_form<Modes>();

  int monitored() const { return static_cast<int>(meas_a.size()); }

  /// Largest rate scale in the system; sets default integrator step sizes.
  double characteristic_rate() const {
    double rate = std::max(drift.cwiseAbs().rowwise().sum().maxCoeff(),
                           diffusion.cwiseAbs().rowwise().sum().maxCoeff());
    double meas = 0.0;
    for (int k = 0; k < monitored(); ++k) meas += meas_a[k].squaredNorm() + meas_b[k].squaredNorm();
    return std::max({rate, 4.0 * meas, 1e-300});
  }
};

}  // namespace gsq
