#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sdl/errors.hpp"
#include "sdl/quadrature.hpp"

using namespace sdl;

TEST(Quadrature, SmoothIntegrands) {
  const QuadResult r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0, 1e-13);
  const QuadResult g = integrate_adaptive([](double x) { return std::exp(-x * x); }, -10.0, 10.0);
  EXPECT_NEAR(g.value, std::sqrt(std::numbers::pi), 1e-13);
}

TEST(Quadrature, EndpointSquareRootBehaviour) {
  const QuadResult r = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, {1e-13, 1e-12, 10000});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-12);
}

TEST(Quadrature, BreakpointsHandleKinks) {
  const std::vector<double> bp{0.3};
  const QuadResult r = integrate_adaptive([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, {}, bp);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-14);
}

TEST(Quadrature, ReversedLimitsFlipSign) {
  const QuadResult r = integrate_adaptive([](double x) { return x * x; }, 1.0, 0.0);
  EXPECT_NEAR(r.value, -1.0 / 3.0, 1e-15);
}

TEST(Quadrature, NonConvergenceIsReportedNotHidden) {
  const auto hard = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.123456789)); };
  const QuadResult r = integrate_adaptive(hard, 0.0, 1.0, {1e-14, 1e-14, 5});
  EXPECT_FALSE(r.converged);
  EXPECT_THROW(integrate_checked(hard, 0.0, 1.0, {1e-14, 1e-14, 5}, "test"), QuadratureFailure);
}

TEST(Quadrature, GaussPanelsExactForLowDegree) {
  // Five Gauss-Legendre nodes integrate degree 9 exactly.
  const auto p = [](double x) { return std::pow(x, 9) - 3.0 * std::pow(x, 4) + 1.0; };
  EXPECT_NEAR(integrate_gauss_panels(p, 0.0, 2.0, 1), 1024.0 / 10.0 - 3.0 * 32.0 / 5.0 + 2.0, 1e-12);
  EXPECT_NEAR(integrate_gauss_panels([](double x) { return std::cos(x); }, 0.0, 1.0, 64), std::sin(1.0), 1e-15);
}
