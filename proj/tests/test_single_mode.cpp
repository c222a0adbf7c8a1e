#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "gsq/core/evolve.hpp"
#include "gsq/single_mode.hpp"

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

TEST(SingleMode, QndConditionalSteadyState) {
  const SteadyResult r = conditional_steady(point(0.0, 0.0, 5.0, 0.0));
  EXPECT_NEAR(r.v_squeezed, (-1.0 + std::sqrt(21.0)) / 10.0, 1e-14);
  // θ = 0: U obeys a linear equation with fixed point 2n+1+d.
  EXPECT_NEAR(r.u_antisqueezed, 6.0, 1e-14);
  EXPECT_TRUE(r.stable);
}

TEST(SingleMode, QndUnconditionalSteadyState) {
  const SteadyResult r = unconditional_steady(point(0.0, 0.0, 5.0, 0.0));
  EXPECT_DOUBLE_EQ(r.v_squeezed, 1.0);
  EXPECT_DOUBLE_EQ(r.u_antisqueezed, 6.0);
}

TEST(SingleMode, FrozenConditionalValues) {
  // Largest roots of the quadratic fixed-point equations, computed at 40 digits.
  const SteadyResult a = conditional_steady(point(-0.5, 0.05, 5.0, 0.0));
  EXPECT_NEAR(a.v_squeezed, 0.27196567254539364638, 1e-13);
  EXPECT_NEAR(a.u_antisqueezed, 19.667790212472921834, 1e-11);
  const SteadyResult b = conditional_steady(point(0.3, 0.5, 50.0, 1.0));
  EXPECT_NEAR(b.v_squeezed, 0.45521492428952269991, 1e-13);
  EXPECT_NEAR(b.u_antisqueezed, 3.2172976705309647272, 1e-12);
  const SteadyResult c = conditional_steady(point(0.6, 0.0, 2.0, 0.0), Rates{4.0, 2.0});
  EXPECT_NEAR(c.v_squeezed, 0.83217120271213535195, 1e-13);
  EXPECT_NEAR(c.u_antisqueezed, 1.2227277241102082075, 1e-13);
}

TEST(SingleMode, UnboundedAntisqueezingBelowThreshold) {
  const SteadyResult r = conditional_steady(point(-0.5, 0.0, 5.0, 0.0));
  EXPECT_FALSE(r.stable);
  EXPECT_TRUE(std::isfinite(r.v_squeezed));
  EXPECT_TRUE(std::isinf(r.u_antisqueezed));
}

TEST(SingleMode, UnconditionalUnstableThrows) {
  try {
    unconditional_steady(point(-0.5, 0.0, 5.0, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unstable_regime);
  }
}

TEST(SingleMode, NonzeroPhaseIsRejectedByClosedForms) {
  InteractionParams p = point(0.2, 0.0, 5.0, 0.0);
  p.phi = 0.1;
  EXPECT_THROW(conditional_steady(p), Error);
  EXPECT_NO_THROW(make_spec(p, true));
}

TEST(SingleMode, InvalidParameters) {
  EXPECT_THROW(point(2.0, 0.0, 5.0, 0.0).validate(), Error);
  EXPECT_THROW(point(0.0, 1.5, 5.0, 0.0).validate(), Error);
  EXPECT_THROW(point(0.0, 0.0, -1.0, 0.0).validate(), Error);
  EXPECT_THROW(point(0.0, 0.0, 1.0, -0.1).validate(), Error);
}

TEST(SingleMode, EngineMatchesClosedForms) {
  for (double theta : {-0.9, -0.3, 0.0, 0.4, 1.2}) {
    for (double eps : {0.0, 0.1, 0.7}) {
      for (double n : {0.0, 2.0}) {
        const InteractionParams p = point(theta, eps, 3.0, n);
        const SteadyResult c = conditional_steady(p);
        if (c.stable) {
          const auto g = steady_covariance<1>(make_spec(p, true), true).covariance;
          EXPECT_NEAR(g(0, 0), c.v_squeezed, 1e-8 * c.v_squeezed);
          EXPECT_NEAR(g(1, 1), c.u_antisqueezed, 1e-8 * c.u_antisqueezed);
          EXPECT_NEAR(g(0, 1), 0.0, 1e-9);
        }
        if (unconditional_rate(theta, rates_of(p)) > 0.0) {
          const SteadyResult u = unconditional_steady(p);
          const auto g = steady_covariance<1>(make_spec(p, false), false).covariance;
          EXPECT_NEAR(g(0, 0), u.v_squeezed, 1e-8 * u.v_squeezed);
          EXPECT_NEAR(g(1, 1), u.u_antisqueezed, 1e-8 * u.u_antisqueezed);
        }
      }
    }
  }
}

TEST(SingleMode, DepthFormDependsOnlyOnRatio) {
  for (double theta : {-1.0, -0.2, 0.3, 1.1}) {
    for (double eps : {0.0, 0.05, 0.5}) {
      const double d = 7.5, n = 0.3, scale = 3.7;
      const Rates r{d * scale, scale};
      EXPECT_NEAR(depth_form::squeezed_conditional<double>(theta, d, n, eps), conditional_v<double>(theta, eps, n, r),
                  1e-12);
      const double rate = unconditional_rate(theta, r);
      if (rate > 0.0) {
        InteractionParams p = point(theta, eps, d, n);
        p.gamma = scale;
        EXPECT_NEAR(depth_form::squeezed_unconditional<double>(theta, d, n), unconditional_steady(p).v_squeezed,
                    1e-12);
        EXPECT_NEAR(depth_form::antisqueezed_unconditional<double>(theta, d, n),
                    unconditional_steady(p).u_antisqueezed, 1e-12);
      } else {
        EXPECT_TRUE(std::isinf(depth_form::squeezed_unconditional<double>(theta, d, n)));
      }
    }
  }
}

TEST(SingleMode, ConditionalNeverExceedsUnconditional) {
  for (double theta = -0.19; theta < 1.5; theta += 0.07) {
    for (double eps : {0.0, 0.2, 0.5}) {
      const double vu = depth_form::squeezed_unconditional<double>(theta, 5.0, 0.5);
      const double vc = depth_form::squeezed_conditional<double>(theta, 5.0, 0.5, eps);
      EXPECT_LE(vc, vu * (1.0 + 1e-12));
    }
  }
}

TEST(SingleMode, HeisenbergBoundHolds) {
  for (double theta = -1.5; theta < 1.5; theta += 0.05) {
    for (double eps : {0.0, 0.05, 0.5, 0.9}) {
      const SteadyResult r = conditional_steady(point(theta, eps, 20.0, 0.0));
      if (r.stable) {
        EXPECT_GE(r.v_squeezed * r.u_antisqueezed, 1.0 - 1e-12);
      }
    }
  }
}

TEST(SingleMode, ComplexStepMatchesFiniteDifference) {
  const double theta = -0.3, h = 1e-6;
  const double cs =
      depth_form::squeezed_conditional<std::complex<double>>({theta, 1e-30}, 5.0, 0.0, 0.05).imag() / 1e-30;
  const double fd = (depth_form::squeezed_conditional<double>(theta + h, 5.0, 0.0, 0.05) -
                     depth_form::squeezed_conditional<double>(theta - h, 5.0, 0.0, 0.05)) /
                    (2.0 * h);
  EXPECT_NEAR(cs, fd, 1e-7);
}

TEST(SingleMode, VarianceCurvesFlagUnstableRows) {
  const std::vector<double> grid{-1.0, -0.5, -0.1, 0.0, 0.5};
  const SweepTable t = variance_curves(grid, point(0.0, 0.0, 5.0, 0.0));
  ASSERT_EQ(t.rows(), grid.size());
  const auto& stable = t.column("stable");
  const auto& vc = t.column("V_c");
  const auto& vu = t.column("V_u");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool expected = 1.0 + 5.0 * std::sin(2.0 * grid[i]) / 2.0 > 0.0;
    EXPECT_EQ(stable[i] != 0.0, expected);
    EXPECT_TRUE(std::isfinite(vc[i]));
    EXPECT_EQ(std::isfinite(vu[i]), expected);
  }
  EXPECT_NO_THROW(t.validate());
}

TEST(SingleMode, QndPulseVariance) {
  EXPECT_DOUBLE_EQ(qnd_pulse_variance(2.0, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(qnd_pulse_variance(0.0, 3.0), 1.0);
}

TEST(SingleMode, ThermalOnlyLimit) {
  // g = 0 leaves the thermal state 2n+1 in both quadratures.
  const SteadyResult r = conditional_steady(point(0.4, 0.3, 1.0, 1.5), Rates{0.0, 1.0});
  EXPECT_NEAR(r.v_squeezed, 4.0, 1e-14);
  EXPECT_NEAR(r.u_antisqueezed, 4.0, 1e-14);
}
