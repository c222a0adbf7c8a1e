#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "gsq/core/evolve.hpp"
#include "gsq/single_mode.hpp"

namespace gsq {

/// Two modes probed in sequence by the same field with equal coupling g. Mode 1
/// rotates at +ω and mode 2 at −ω (counter-rotating pair).
struct CascadedParams {
  std::array<double, 2> alpha{1.0, 1.0};
  std::array<double, 2> beta{0.0, 0.0};
  std::array<double, 2> gamma{1.0, 1.0};
  std::array<double, 2> n{0.0, 0.0};
  double g = 1.0;
  double omega = 0.0;
  double epsilon = 0.0;
  double phi = 0.0;
  bool rwa = false;

  /// Fully symmetric parameters from single-mode knobs, g = dγ.
  static CascadedParams symmetric(const InteractionParams& p, double omega = 0.0, bool rwa = true) {
    CascadedParams c;
    c.alpha = {p.alpha(), p.alpha()};
    c.beta = {p.beta(), p.beta()};
    c.gamma = {p.gamma, p.gamma};
    c.n = {p.n, p.n};
    c.g = p.coupling();
    c.omega = omega;
    c.epsilon = p.epsilon;
    c.phi = p.phi;
    c.rwa = rwa;
    return c;
  }

  void validate() const {
    require(g > 0.0, ErrorCode::invalid_argument, "g must be positive");
    for (int i = 0; i < 2; ++i) {
      require(gamma[i] > 0.0, ErrorCode::invalid_argument, "gamma_i must be positive");
      require(n[i] >= 0.0, ErrorCode::invalid_argument, "n_i must be non-negative");
    }
    require(omega >= 0.0, ErrorCode::invalid_argument, "omega must be non-negative");
    require(epsilon >= 0.0 && epsilon <= 1.0, ErrorCode::invalid_argument, "epsilon must lie in [0, 1]");
  }

  /// The rotating-wave treatment needs g, γ_i n_i ≪ ω.
  std::optional<std::string> rwa_warning() const {
    const double slow = std::max({g, gamma[0] * n[0], gamma[1] * n[1]});
    if (rwa && (omega <= 0.0 || slow / omega > 0.1)) {
      return "rotating-wave approximation questionable: max(g, gamma_i n_i)/omega = " +
             (omega > 0.0 ? format_number(slow / omega) : std::string("inf"));
    }
    return std::nullopt;
  }
};

/// s_i = ((α_i+β_i)/2) a_i + ((α_i−β_i)/2) a_i†
inline JumpVector<2> probe_operator(const CascadedParams& p, int mode) {
  const double a = p.alpha[mode], b = p.beta[mode];
  return 0.5 * (a + b) * ops::annihilation<2>(mode) + 0.5 * (a - b) * ops::creation<2>(mode);
}

/// Coefficients of the field-mediated interaction
///   −i(g/2)(s₂†s₁ − s₁†s₂) = −i[tms (a₁a₂ − a₁†a₂†) + bs (a₁a₂† − a₁†a₂)],
/// tms = (g/2)(α₂β₁ − α₁β₂)/2, bs = (g/2)(α₂β₁ + α₁β₂)/2.
struct MediatedInteraction {
  double two_mode_squeezing = 0.0;
  double beam_splitter = 0.0;
};

inline MediatedInteraction mediated_interaction(const CascadedParams& p) {
  const double half_g = 0.5 * p.g;
  return {half_g * 0.5 * (p.alpha[1] * p.beta[0] - p.alpha[0] * p.beta[1]),
          half_g * 0.5 * (p.alpha[1] * p.beta[0] + p.alpha[0] * p.beta[1])};
}

/// Hamiltonian matrix of −i(g/2)(s₂†s₁ − s₁†s₂), built from the jump operators.
inline RealMatrix<2> mediated_hamiltonian(const CascadedParams& p) {
  const JumpVector<2> s1 = probe_operator(p, 0), s2 = probe_operator(p, 1);
  const ComplexMatrix<2> y = cplx(0.0, -0.5 * p.g) * (ops::product<2>(ops::adjoint<2>(s2), s1) -
                                                       ops::product<2>(ops::adjoint<2>(s1), s2));
  return ops::hamiltonian_matrix<2>(y);
}

/// Same Hamiltonian assembled from the two-mode-squeezing and beam-splitter
/// coefficients.
inline RealMatrix<2> mediated_hamiltonian_from_coefficients(const MediatedInteraction& c) {
  const JumpVector<2> a1 = ops::annihilation<2>(0), a2 = ops::annihilation<2>(1);
  const JumpVector<2> a1d = ops::creation<2>(0), a2d = ops::creation<2>(1);
  const ComplexMatrix<2> y =
      cplx(0.0, -1.0) * (c.two_mode_squeezing * (ops::product<2>(a1, a2) - ops::product<2>(a1d, a2d)) +
                         c.beam_splitter * (ops::product<2>(a1, a2d) - ops::product<2>(a1d, a2)));
  return ops::hamiltonian_matrix<2>(y);
}

/// Full (non-RWA) lab-frame cascaded system: local Hamiltonians ±ω a†a, the
/// mediated interaction, the collective jump √g(s₁+s₂) split over the homodyne
/// channels (monitored when `conditional`), and thermal baths on each mode.
inline SystemSpec<2> make_cascaded_spec(const CascadedParams& p, bool conditional) {
  p.validate();
  SystemSpec<2> spec;
  spec.hamiltonian.diagonal() << p.omega, p.omega, -p.omega, -p.omega;
  spec.hamiltonian += mediated_hamiltonian(p);
  const JumpVector<2> collective = probe_operator(p, 0) + probe_operator(p, 1);
  const int measured = append_homodyne_channels<2>(spec.jumps, collective, p.g, p.epsilon, p.phi);
  for (int i = 0; i < 2; ++i) append_thermal_channels<2>(spec.jumps, i, p.gamma[i], p.n[i]);
  spec.monitored = conditional ? measured : 0;
  return spec;
}

/// Rotating-frame system after the RWA: the residual two-mode-squeezing
/// Hamiltonian, dissipators (g/2)D[s₊ ± s₋] and four sideband homodyne
/// channels (cosine and sine quadratures at ±ω).
inline SystemSpec<2> make_rwa_joint_spec(const CascadedParams& p, bool conditional) {
  p.validate();
  const double a1 = p.alpha[0], b1 = p.beta[0], a2 = p.alpha[1], b2 = p.beta[1];
  const JumpVector<2> s_plus = 0.5 * (a1 + b1) * ops::annihilation<2>(0) + 0.5 * (a2 - b2) * ops::creation<2>(1);
  const JumpVector<2> s_minus = 0.5 * (a2 + b2) * ops::annihilation<2>(1) + 0.5 * (a1 - b1) * ops::creation<2>(0);
  const JumpVector<2> cosine = s_plus + s_minus;
  const JumpVector<2> sine = s_plus - s_minus;
  const cplx i(0.0, 1.0), phase = std::polar(1.0, p.phi);
  const double e = p.epsilon, g = p.g;

  SystemSpec<2> spec;
  const double tms = -g * (a2 * b1 - a1 * b2) / 4.0;
  spec.hamiltonian = ops::hamiltonian_matrix<2>(
      cplx(0.0, tms) * (ops::product<2>(ops::annihilation<2>(0), ops::annihilation<2>(1)) -
                        ops::product<2>(ops::creation<2>(0), ops::creation<2>(1))));
  if (e < 1.0) {
    spec.jumps.push_back(std::sqrt(g * (1.0 - e) / 2.0) * phase * cosine);
    spec.jumps.push_back(-i * std::sqrt(g * (1.0 - e) / 2.0) * phase * sine);
  }
  if (e > 0.0) {
    spec.jumps.push_back(i * std::sqrt(g * e / 2.0) * phase * cosine);
    spec.jumps.push_back(std::sqrt(g * e / 2.0) * phase * sine);
  }
  const int measured = static_cast<int>(spec.jumps.size());
  for (int k = 0; k < 2; ++k) append_thermal_channels<2>(spec.jumps, k, p.gamma[k], p.n[k]);
  spec.monitored = conditional ? measured : 0;
  return spec;
}

inline void require_symmetric(const CascadedParams& p) {
  const auto same = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); };
  require(same(p.alpha[0], p.alpha[1]) && same(p.beta[0], p.beta[1]) && same(p.gamma[0], p.gamma[1]) &&
              same(p.n[0], p.n[1]),
          ErrorCode::asymmetric_params, "EPR factorization needs identical parameters for both modes");
}

/// Single-mode specs of the EPR modes in the symmetric RWA system. The + mode
/// carries L₊ = αX₊ + iβP₊ at rate g/2, the − mode L₋ = αP₋ − iβX₋; each spec is
/// written in its own mode's quadratures (X₊, P₊) and (X₋, P₋).
inline std::pair<SystemSpec<1>, SystemSpec<1>> make_rwa_epr_specs(const CascadedParams& p, bool conditional) {
  p.validate();
  require_symmetric(p);
  const cplx i(0.0, 1.0), phase = std::polar(1.0, p.phi);
  const double a = p.alpha[0], b = p.beta[0], e = p.epsilon, g = p.g;
  const JumpVector<1> l_plus = a * ops::x<1>(0) + i * b * ops::p<1>(0);
  const JumpVector<1> l_minus = a * ops::p<1>(0) - i * b * ops::x<1>(0);

  SystemSpec<1> plus, minus;
  if (e < 1.0) {
    plus.jumps.push_back(std::sqrt(g * (1.0 - e) / 2.0) * phase * l_plus);
    minus.jumps.push_back(std::sqrt(g * (1.0 - e) / 2.0) * phase * l_minus);
  }
  if (e > 0.0) {
    plus.jumps.push_back(i * std::sqrt(g * e / 2.0) * phase * l_plus);
    minus.jumps.push_back(i * std::sqrt(g * e / 2.0) * phase * l_minus);
  }
  const int measured = static_cast<int>(plus.jumps.size());
  append_thermal_channels<1>(plus.jumps, 0, p.gamma[0], p.n[0]);
  append_thermal_channels<1>(minus.jumps, 0, p.gamma[0], p.n[0]);
  plus.monitored = minus.monitored = conditional ? measured : 0;
  return {plus, minus};
}

struct EprBlocks {
  RealMatrix<1> plus;   // (X₊, P₊)
  RealMatrix<1> minus;  // (X₋, P₋)
  RealMatrix<1> cross;  // <X₊/P₊, X₋/P₋> correlations
};

/// Orthogonal symplectic change of basis to (X₊, P₊, X₋, P₋),
/// X± = (X₁ ± X₂)/√2, P± = (P₁ ± P₂)/√2.
inline RealMatrix<2> epr_basis() {
  RealMatrix<2> t;
  t << 1, 0, 1, 0,  //
      0, 1, 0, 1,   //
      1, 0, -1, 0,  //
      0, 1, 0, -1;
  return t / std::sqrt(2.0);
}

inline EprBlocks epr_blocks(const RealMatrix<2>& epr) {
  return {epr.block<2, 2>(0, 0), epr.block<2, 2>(2, 2), epr.block<2, 2>(0, 2)};
}

inline EprBlocks epr_transform(const RealMatrix<2>& joint) {
  const RealMatrix<2> t = epr_basis();
  return epr_blocks(t * joint * t.transpose());
}

struct EntanglementWitness {
  double epr_sum = 0.0;
  bool entangled = false;
};

inline constexpr double kEntanglementMargin = 1e-12;  // round-off must not certify

/// Var(X₊) + Var(P₋) in shot-noise units; below 2 certifies entanglement.
inline EntanglementWitness entanglement_criterion(const RealMatrix<1>& plus, const RealMatrix<1>& minus) {
  const double sum = plus(0, 0) + minus(1, 1);
  return {sum, sum < 2.0 - kEntanglementMargin};
}

/// Steady EPR blocks of the joint two-mode system (RWA or lab frame), integrated
/// directly in the EPR basis. When the antisqueezed pair (P₊, X₋) has no steady
/// state (e.g. ε = 0 below θ_c) only the squeezed pair (X₊, P₋), an invariant
/// subspace of the dynamics, is required to converge; `bounded` is then false
/// and only entries touching X₊ or P₋ are meaningful.
struct EprSteady {
  EprBlocks blocks;
  bool bounded = true;
  double cross_max = 0.0;  // largest |cross entry| among the meaningful ones
};

inline EprSteady epr_steady(const CascadedParams& p, bool conditional, SteadyOptions options = {}) {
  const SystemSpec<2> joint = p.rwa ? make_rwa_joint_spec(p, conditional) : make_cascaded_spec(p, conditional);
  const SystemSpec<2> epr = transform_spec<2>(joint, epr_basis());
  EprSteady out;
  RealMatrix<2> gamma;
  try {
    gamma = steady_covariance<2>(epr, conditional, options).covariance;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::divergence_detected) throw;
    options.watch = {0, 3};
    gamma = steady_covariance<2>(epr, conditional, options).covariance;
    out.bounded = false;
  }
  out.blocks = epr_blocks(gamma);
  const RealMatrix<1>& c = out.blocks.cross;
  out.cross_max = out.bounded ? max_abs(c) : std::max({std::abs(c(0, 0)), std::abs(c(0, 1)), std::abs(c(1, 1))});
  return out;
}

}  // namespace gsq
