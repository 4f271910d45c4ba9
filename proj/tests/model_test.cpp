#include <cmath>

#include <gtest/gtest.h>

#include "shocklab/model.hpp"
#include "support.hpp"

using namespace shocklab;

TEST(Pressure, DirectValues) {
  EXPECT_DOUBLE_EQ(pressure(1.0), 1.0);
  EXPECT_DOUBLE_EQ(pressure(2.0), 0.5);
  EXPECT_DOUBLE_EQ(pressure_deriv(1.0), -1.0);
  EXPECT_DOUBLE_EQ(pressure_deriv(2.0), -0.25);
}

TEST(Pressure, RejectsNonPositiveVolume) {
  EXPECT_THROW(pressure(0.0), Error);
  EXPECT_THROW(pressure(-1.0), Error);
  EXPECT_THROW(pressure_deriv(0.0), Error);
  try {
    pressure(-2.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
    EXPECT_EQ(e.code(), "positivity");
  }
}

TEST(Phi, Values) {
  EXPECT_EQ(phi(1.0), 0.0);
  EXPECT_NEAR(phi(2.0), 0.3068528194400547, 1e-15);
  EXPECT_NEAR(phi(0.5), 0.1931471805599453, 1e-15);
  EXPECT_THROW(phi(0.0), Error);
}

TEST(Phi, MatchesTaylorSeriesNearOne) {
  // x - log(1+x) = sum_{k>=2} (-1)^k x^k / k
  for (double x : {1e-8, -3e-5, 1e-3, -0.01, 0.2}) {
    double series = 0.0, term = x;
    for (int k = 2; k < 60; ++k) {
      term *= -x;
      series += -term / k;
    }
    EXPECT_NEAR(phi(1.0 + x), series, 1e-15 * std::max(1.0, std::abs(series)) + 1e-30) << x;
  }
}

TEST(Phi, ConvexAndNonnegative) {
  testsupport::Gen g(11);
  for (int i = 0; i < 20000; ++i) {
    const double a = g.log_uniform(1e-3, 1e3), b = g.log_uniform(1e-3, 1e3);
    EXPECT_GE(phi(a), 0.0);
    EXPECT_LE(phi(0.5 * (a + b)), 0.5 * (phi(a) + phi(b)) + 1e-12 * (phi(a) + phi(b) + 1.0));
  }
}

TEST(RelPressure, Values) {
  EXPECT_EQ(rel_pressure(1.3, 1.3), 0.0);
  EXPECT_NEAR(rel_pressure(2.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(rel_pressure(0.5, 1.0), 0.5, 1e-15);
  EXPECT_THROW(rel_pressure(0.0, 1.0), Error);
  EXPECT_THROW(rel_pressure(1.0, -1.0), Error);
}

TEST(RelPressure, AgreesWithDefinition) {
  testsupport::Gen g(12);
  for (int i = 0; i < 10000; ++i) {
    const double v = g.log_uniform(0.05, 20), w = g.log_uniform(0.05, 20);
    const double def = 1.0 / v - 1.0 / w + (v - w) / (w * w);
    EXPECT_NEAR(rel_pressure(v, w), def, 1e-11 * (std::abs(def) + 1.0 / v + 1.0 / w));
    EXPECT_GE(rel_pressure(v, w), 0.0);
  }
}

TEST(RankineHugoniot, ReferenceTwoShock) {
  const auto s = solve_rankine_hugoniot(1.0, 0.0, 0.1, Family::two);
  EXPECT_NEAR(s.v_plus, 1.0 / 0.9, 1e-15);
  EXPECT_NEAR(s.v_plus, 1.111111, 1e-6);
  EXPECT_NEAR(s.u_plus, -0.1054093, 1e-7);
  EXPECT_NEAR(s.sigma, 0.9486833, 1e-7);
  EXPECT_NEAR(s.sigma, std::sqrt(0.9), 1e-15);
  EXPECT_LE(rh_residual(s), 1e-12);
  EXPECT_TRUE(lax_admissible(s));
  EXPECT_NEAR(std::abs(s.sigma - 1.0), 0.0513, 1e-4);
  EXPECT_LE(std::abs(s.sigma - s.sigma_star()), 0.6 * s.eps);
}

TEST(RankineHugoniot, Errors) {
  EXPECT_THROW(solve_rankine_hugoniot(1.0, 0.0, 0.0, Family::two), Error);
  EXPECT_THROW(solve_rankine_hugoniot(1.0, 0.0, 1.0, Family::two), Error);
  EXPECT_THROW(solve_rankine_hugoniot(1.0, 0.0, 2.0, Family::two), Error);
  EXPECT_THROW(solve_rankine_hugoniot(1.0, 0.0, -0.1, Family::two), Error);
  EXPECT_THROW(solve_rankine_hugoniot(0.0, 0.0, 0.1, Family::two), Error);
  try {
    solve_rankine_hugoniot(1.0, 0.0, 0.0, Family::two);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "degenerate_shock");
  }
  try {
    solve_rankine_hugoniot(1.0, 0.0, 2.0, Family::two);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "amplitude_too_large");
  }
}

TEST(RankineHugoniot, RandomStatesSatisfyJumpAndLax) {
  testsupport::Gen g(13);
  for (int i = 0; i < 5000; ++i) {
    const double vm = g.log_uniform(0.1, 10), um = g.uniform(-5, 5);
    const double eps = g.uniform(1e-4, 0.9) / vm;
    for (Family f : {Family::one, Family::two}) {
      const auto s = solve_rankine_hugoniot(vm, um, eps, f);
      EXPECT_LE(rh_residual(s), 1e-12 * (1.0 + std::abs(um) + 1.0 / vm));
      EXPECT_TRUE(lax_admissible(s));
      EXPECT_NEAR(std::abs(1.0 / s.v_plus - 1.0 / s.v_minus), eps, 1e-12 / vm);
      EXPECT_NEAR(s.sigma * s.sigma, 1.0 / (s.v_minus * s.v_plus), 1e-12 / (vm * vm));
    }
  }
}

TEST(RankineHugoniot, FamilyOneIsMirrorOfFamilyTwo) {
  // Reflecting a one-shock (x -> -x, u -> -u) gives a two-shock that leaves
  // the one-shock's right state.
  const auto one = solve_rankine_hugoniot(1.3, 0.4, 0.05, Family::one);
  const auto two = solve_rankine_hugoniot(one.v_plus, -one.u_plus, 0.05, Family::two);
  EXPECT_NEAR(two.v_plus, one.v_minus, 1e-14);
  EXPECT_NEAR(two.u_plus, -one.u_minus, 1e-14);
  EXPECT_NEAR(two.sigma, -one.sigma, 1e-14);
}

TEST(RankineHugoniot, SpeedGapScalesWithAmplitude) {
  for (double vm : {0.5, 1.0, 2.0}) {
    double prev = 0.0;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
      const auto s = solve_rankine_hugoniot(vm, 0.0, eps, Family::two);
      const double r = std::abs(s.sigma - s.sigma_star()) / eps;
      if (prev > 0.0) EXPECT_LT(std::abs(r / prev - 1.0), 0.25);
      prev = r;
    }
  }
}

TEST(RiemannShock, PiecewiseConstant) {
  const RiemannShock R(solve_rankine_hugoniot(1.0, 0.0, 0.1, Family::two));
  EXPECT_EQ(R(-3.0).first, 1.0);
  EXPECT_EQ(R(-3.0).second, 0.0);
  EXPECT_EQ(R(2.0).first, R.end_states().v_plus);
  EXPECT_EQ(R(2.0).second, R.end_states().u_plus);
}

TEST(GasModel, AlphaRange) {
  EXPECT_DOUBLE_EQ(GasModel(0.3).beta(), 0.7);
  EXPECT_EQ(GasModel(1.0).beta(), 0.0);
  EXPECT_THROW(GasModel(-0.1), Error);
  EXPECT_THROW(GasModel(1.5), Error);
}
