#pragma once

#include <cmath>

#include "gsq/core/types.hpp"

// Linear operators r^T v are represented by their coefficient vector v over
// the quadratures (x1, p1, ..., xa, pa); quadratic operators r^T Y r by Y.
namespace gsq::ops {

template <int Modes>
JumpVector<Modes> x(int mode) {
  JumpVector<Modes> v = JumpVector<Modes>::Zero();
  v(2 * mode) = 1.0;
  return v;
}

template <int Modes>
JumpVector<Modes> p(int mode) {
  JumpVector<Modes> v = JumpVector<Modes>::Zero();
  v(2 * mode + 1) = 1.0;
  return v;
}

/// a = (X + iP)/√2
template <int Modes>
JumpVector<Modes> annihilation(int mode) {
  return (x<Modes>(mode) + cplx(0.0, 1.0) * p<Modes>(mode)) / std::sqrt(2.0);
}

template <int Modes>
JumpVector<Modes> creation(int mode) {
  return annihilation<Modes>(mode).conjugate();
}

/// Coefficient vector of the adjoint operator.
template <int Modes>
JumpVector<Modes> adjoint(const JumpVector<Modes>& v) {
  return v.conjugate();
}

/// Y such that (r^T u)(r^T v) = r^T Y r.
template <int Modes>
ComplexMatrix<Modes> product(const JumpVector<Modes>& u, const JumpVector<Modes>& v) {
  return u * v.transpose();
}

/// Hamiltonian matrix M of the Hermitian operator r^T Y r = r^T M r / 2, up to
/// an additive constant from operator ordering.
template <int Modes>
RealMatrix<Modes> hamiltonian_matrix(const ComplexMatrix<Modes>& y) {
  const ComplexMatrix<Modes> m = y + y.transpose();
  require(max_abs(m.imag()) <= 1e-12 * std::max(1.0, max_abs(m.real())), ErrorCode::non_hermitian_input,
          "quadratic operator is not Hermitian");
  return m.real();
}

}  // namespace gsq::ops
