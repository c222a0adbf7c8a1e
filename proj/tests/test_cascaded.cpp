#include <gtest/gtest.h>

#include <cmath>

#include "gsq/cascaded.hpp"
#include "gsq/core/evolve.hpp"

using namespace gsq;

namespace {

InteractionParams point(double theta, double eps, double d, double n) {
  InteractionParams p;
  p.theta = theta;
  p.epsilon = eps;
  p.d = d;
  p.n = n;
  return p;
}

}  // namespace

TEST(Cascaded, SymmetricCouplingIsPureBeamSplitter) {
  const CascadedParams p = CascadedParams::symmetric(point(0.37, 0.0, 4.0, 0.0));
  const MediatedInteraction m = mediated_interaction(p);
  EXPECT_EQ(m.two_mode_squeezing, 0.0);
  EXPECT_NE(m.beam_splitter, 0.0);
}

TEST(Cascaded, CrossedProbesGiveTwoModeSqueezingCoefficient) {
  CascadedParams p;
  p.alpha = {1.0, 0.0};
  p.beta = {0.0, 1.0};
  p.g = 3.0;
  const MediatedInteraction m = mediated_interaction(p);
  EXPECT_DOUBLE_EQ(m.two_mode_squeezing, -p.g / 4.0);
  EXPECT_DOUBLE_EQ(m.beam_splitter, p.g / 4.0);
}

TEST(Cascaded, MediatedHamiltonianMatchesExpansion) {
  CascadedParams p;
  p.alpha = {std::cos(0.3), std::cos(-0.8)};
  p.beta = {std::sin(0.3), std::sin(-0.8)};
  p.g = 2.5;
  const RealMatrix<2> direct = mediated_hamiltonian(p);
  const RealMatrix<2> expanded = mediated_hamiltonian_from_coefficients(mediated_interaction(p));
  EXPECT_NEAR(max_abs(direct - expanded), 0.0, 1e-14);
}

TEST(Cascaded, LabFrameCarriesCounterRotatingFrequencies) {
  CascadedParams p = CascadedParams::symmetric(point(0.0, 0.0, 1.0, 0.0), 7.0, false);
  const SystemSpec<2> spec = make_cascaded_spec(p, false);
  const RealMatrix<2> local = spec.hamiltonian - mediated_hamiltonian(p);
  EXPECT_NEAR(local(0, 0), 7.0, 1e-14);
  EXPECT_NEAR(local(3, 3), -7.0, 1e-14);
}

TEST(Cascaded, EprTransformOfVacuum) {
  const EprBlocks b = epr_transform(RealMatrix<2>::Identity());
  EXPECT_NEAR(max_abs(b.plus - RealMatrix<1>::Identity()), 0.0, 1e-15);
  EXPECT_NEAR(max_abs(b.minus - RealMatrix<1>::Identity()), 0.0, 1e-15);
  EXPECT_NEAR(max_abs(b.cross), 0.0, 1e-15);
  const EntanglementWitness w = entanglement_criterion(b.plus, b.minus);
  EXPECT_NEAR(w.epr_sum, 2.0, 1e-15);
  EXPECT_FALSE(w.entangled);
}

TEST(Cascaded, CorrelatedPositionsReduceEprVariance) {
  RealMatrix<2> g = RealMatrix<2>::Identity();
  g(0, 2) = g(2, 0) = -0.4;
  EXPECT_LT(epr_transform(g).plus(0, 0), 1.0 + 1e-15);
  g(0, 2) = g(2, 0) = 0.4;
  // With this ordering X₊ inherits ⟨X₁X₂⟩ > 0.
  EXPECT_GT(epr_transform(g).plus(0, 0), 1.0);
  EXPECT_LT(epr_transform(g).minus(0, 0), 1.0);
}

TEST(Cascaded, AsymmetricParamsRejected) {
  CascadedParams p = CascadedParams::symmetric(point(0.2, 0.0, 5.0, 0.0));
  p.n[1] = 0.5;
  try {
    make_rwa_epr_specs(p, true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::asymmetric_params);
  }
}

TEST(Cascaded, QndEprSpecsMeasureXPlusAndPMinus) {
  const auto [plus, minus] = make_rwa_epr_specs(CascadedParams::symmetric(point(0.0, 0.0, 5.0, 0.0)), true);
  const auto dp = build_matrices(plus), dm = build_matrices(minus);
  EXPECT_GT(std::abs(dp.meas_a[0](0)), 0.0);
  EXPECT_EQ(dp.meas_a[0](1), 0.0);
  EXPECT_EQ(dm.meas_a[0](0), 0.0);
  EXPECT_GT(std::abs(dm.meas_a[0](1)), 0.0);
  EXPECT_NEAR(dp.meas_b[0].norm() + dm.meas_b[0].norm(), 0.0, 1e-15);
}

TEST(Cascaded, MinusSpecIsPlusSpecWithQuadraturesExchanged) {
  const auto [plus, minus] = make_rwa_epr_specs(CascadedParams::symmetric(point(0.4, 0.2, 5.0, 1.0)), true);
  RealMatrix<1> swap;
  swap << 0.0, 1.0, -1.0, 0.0;  // X → P, P → −X
  const auto g_plus = steady_covariance<1>(plus, true).covariance;
  const auto g_minus = steady_covariance<1>(minus, true).covariance;
  EXPECT_NEAR(max_abs(g_minus - swap * g_plus * swap.transpose()), 0.0, 1e-9);
}

TEST(Cascaded, JointRwaSystemFactorizes) {
  for (double theta : {-0.1, 0.0, 0.3, 0.9}) {
    for (double eps : {0.0, 0.05, 0.5}) {
      for (bool conditional : {true, false}) {
        const InteractionParams sp = point(theta, eps, 5.0, 0.5);
        if (!conditional && unconditional_rate(theta, rates_of(sp)) <= 0.0) continue;
        const CascadedParams p = CascadedParams::symmetric(sp);
        const EprSteady joint = epr_steady(p, conditional);
        ASSERT_TRUE(joint.bounded);
        EXPECT_LT(joint.cross_max, 1e-8);
        const auto [plus, minus] = make_rwa_epr_specs(p, conditional);
        const auto g_plus = steady_covariance<1>(plus, conditional).covariance;
        const auto g_minus = steady_covariance<1>(minus, conditional).covariance;
        EXPECT_NEAR(max_abs(joint.blocks.plus - g_plus), 0.0, 1e-8);
        EXPECT_NEAR(max_abs(joint.blocks.minus - g_minus), 0.0, 1e-8);
      }
    }
  }
}

TEST(Cascaded, EprVariancesEqualSingleModeAtSameCoupling) {
  // Each EPR spec carries √(g/2)(αX ± iβP) = √g·s, i.e. the single-mode
  // problem at the full coupling g. The halved-coupling mapping does not hold.
  for (double theta : {-0.1, 0.2, 0.6}) {
    for (double eps : {0.0, 0.05, 0.5}) {
      const InteractionParams sp = point(theta, eps, 5.0, 0.0);
      const EprSteady joint = epr_steady(CascadedParams::symmetric(sp), true);
      const SteadyResult single = conditional_steady(sp);
      EXPECT_NEAR(joint.blocks.plus(0, 0), single.v_squeezed, 1e-8 * single.v_squeezed);
      EXPECT_NEAR(joint.blocks.minus(1, 1), single.v_squeezed, 1e-8 * single.v_squeezed);
      EXPECT_NEAR(joint.blocks.plus(1, 1), single.u_antisqueezed, 1e-8 * single.u_antisqueezed);
      Rates half = rates_of(sp);
      half.g /= 2.0;
      EXPECT_GT(std::abs(joint.blocks.plus(0, 0) - conditional_steady(sp, half).v_squeezed), 1e-3);
    }
  }
}

TEST(Cascaded, SqueezedPairConvergesBelowThreshold) {
  const InteractionParams sp = point(-0.7, 0.0, 50.0, 0.0);
  const EprSteady joint = epr_steady(CascadedParams::symmetric(sp), true);
  EXPECT_FALSE(joint.bounded);
  const double v = conditional_steady(sp).v_squeezed;
  EXPECT_NEAR(joint.blocks.plus(0, 0), v, 1e-8 * v);
  EXPECT_NEAR(joint.blocks.minus(1, 1), v, 1e-8 * v);
  EXPECT_LT(joint.cross_max, 1e-8);
  EXPECT_TRUE(entanglement_criterion(joint.blocks.plus, joint.blocks.minus).entangled);
}

TEST(Cascaded, HotModesAreNotEntangled) {
  // Far above every critical occupation the EPR sum exceeds 2.
  const InteractionParams sp = point(0.3, 0.0, 5.0, 20.0);
  const EprSteady joint = epr_steady(CascadedParams::symmetric(sp), true);
  EXPECT_FALSE(entanglement_criterion(joint.blocks.plus, joint.blocks.minus).entangled);
}

TEST(Cascaded, LabFrameApproachesRwaAsFrequencyGrows) {
  const InteractionParams sp = point(0.3, 0.0, 2.0, 0.0);
  const double g = sp.coupling();
  const EprSteady rwa = epr_steady(CascadedParams::symmetric(sp, 0.0, true), true);
  SteadyOptions opts;
  opts.tol = 1e-11;
  double previous = std::numeric_limits<double>::infinity();
  for (double ratio : {10.0, 100.0, 1000.0}) {
    const EprSteady lab = epr_steady(CascadedParams::symmetric(sp, ratio * g, false), true, opts);
    const double gap = std::abs(lab.blocks.plus(0, 0) - rwa.blocks.plus(0, 0));
    EXPECT_LT(gap, previous);
    previous = gap;
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(Cascaded, RwaWarningThreshold) {
  CascadedParams p = CascadedParams::symmetric(point(0.0, 0.0, 5.0, 0.0), 10.0, true);
  EXPECT_TRUE(p.rwa_warning().has_value());
  p.omega = 1000.0;
  EXPECT_FALSE(p.rwa_warning().has_value());
}
