#include <cmath>

#include <gtest/gtest.h>

#include "shocklab/inequality_lab.hpp"

using namespace shocklab;

namespace {

Vec sample_on_grid(std::size_t m, double (*f)(double)) {
  Vec W(m);
  for (std::size_t i = 0; i < m; ++i) W[i] = f(static_cast<double>(i) / static_cast<double>(m - 1));
  return W;
}

}  // namespace

TEST(PoincareR, ZeroAndShape) {
  EXPECT_EQ(poincare_R(Vec(101, 0.0), 0.3), 0.0);
  EXPECT_THROW(poincare_R(Vec(2, 1.0), 0.1), Error);
  EXPECT_THROW(poincare_R(Vec(11, 1.0), 0.0), Error);
}

TEST(PoincareR, ClosedFormSpotValues) {
  EXPECT_NEAR(poincare_R(Vec(257, 1.0), 0.1), -10.0 * 9.0 + 1.1 + 2.0 / 3.0 + 0.1, 1e-12);
  for (double d : {0.01, 0.05, 0.1}) EXPECT_NEAR(poincare_R(Vec(65, -2.0), d), -4.0 / 3.0 + 12.0 * d, 1e-12);
  const double exact = -10.0 / 144.0 + 1.1 / 12.0 + 0.1 / 32.0 - 0.9 / 6.0;
  for (std::size_t m : {1025u, 2049u, 4097u}) {
    EXPECT_NEAR(poincare_R(sample_on_grid(m, [](double y) { return y - 0.5; }), 0.1), exact, 1e-5) << m;
  }
}

TEST(PoincareR, SecondOrderInGrid) {
  auto f = [](double y) { return std::cos(3.0 * y) + 0.4 * y * y; };
  const double ref = poincare_R(sample_on_grid(16385, f), 0.05);
  const double e1 = std::abs(poincare_R(sample_on_grid(129, f), 0.05) - ref);
  const double e2 = std::abs(poincare_R(sample_on_grid(257, f), 0.05) - ref);
  EXPECT_GT(e1 / e2, 3.5);
  EXPECT_LT(e1 / e2, 4.5);
}

TEST(PoincareR, GradientMatchesDirectionalDerivative) {
  const std::size_t m = 201;
  Vec W(m), dir(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double y = static_cast<double>(i) / (m - 1);
    W[i] = 0.7 * std::sin(5.0 * y) - 0.3;
    dir[i] = std::cos(2.0 * y) + y;
  }
  const Vec g = poincare_gradient(W, 0.02);
  double analytic = 0.0;
  for (std::size_t i = 0; i < m; ++i) analytic += g[i] * dir[i];
  const double h = 1e-6;
  Vec Wp = W, Wm = W;
  for (std::size_t i = 0; i < m; ++i) {
    Wp[i] += h * dir[i];
    Wm[i] -= h * dir[i];
  }
  const double fd = (poincare_R(Wp, 0.02) - poincare_R(Wm, 0.02)) / (2.0 * h);
  EXPECT_NEAR(analytic, fd, 1e-6 * std::abs(fd));
}

TEST(PoincareSearch, DeterministicAndInsideBall) {
  PoincareSearchOptions opt;
  opt.grid = 129;
  const auto a = poincare_search(0.01, 4.0, 300, 7, opt);
  const auto b = poincare_search(0.01, 4.0, 300, 7, opt);
  EXPECT_EQ(a.max_R, b.max_R);
  EXPECT_EQ(a.argmax_W, b.argmax_W);
  EXPECT_GE(a.max_R, a.max_R_sampling);
  EXPECT_LE(a.max_R, 1e-9);
  Vec f(a.argmax_W.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = a.argmax_W[i] * a.argmax_W[i];
  EXPECT_LE(trapezoid(f, 1.0 / 128.0), 4.0 * (1.0 + 1e-12));
  EXPECT_THROW(poincare_search(0.0, 4.0, 10, 1), Error);
}

TEST(PoincareSearch, LargeDeltaFindsPositiveValues) {
  // W = -2 gives -4/3 + 12 delta > 0 once delta > 1/9.
  PoincareSearchOptions opt;
  opt.grid = 129;
  EXPECT_GT(poincare_search(0.3, 4.0, 300, 3, opt).max_R, 0.0);
}

TEST(PhiBounds, ConstantsAndOrdering) {
  const auto r = check_phi_bounds(1.0, 100000, 11);
  // Extremes sit at v = 3, w = 2 (Phi(3/2)) and at v -> 1/3, w = 1/2.
  const double phi15 = 0.5 - std::log(1.5);
  EXPECT_NEAR(r.c1_low, phi15, 5e-3 * phi15);
  EXPECT_NEAR(r.c2, phi15, 5e-3 * phi15);
  EXPECT_NEAR(r.c1_high, phi(2.0 / 3.0) * 36.0, 0.02 * phi(2.0 / 3.0) * 36.0);
  EXPECT_EQ(r.c1, r.c1_low);
  EXPECT_GT(r.c3, 0.0);
  EXPECT_EQ(r.sim_samples, 100000u);
  EXPECT_EQ(r.sim_violations, 0u);
}

TEST(PhiBounds, StableAcrossSeeds) {
  const auto a = check_phi_bounds(1.0, 100000, 1);
  const auto b = check_phi_bounds(1.0, 100000, 2);
  EXPECT_LT(std::abs(a.c1 - b.c1) / a.c1, 0.05);
  EXPECT_LT(std::abs(a.c2 - b.c2) / a.c2, 0.05);
  EXPECT_LT(std::abs(a.c3 - b.c3) / a.c3, 0.05);
}

TEST(LocalExpansions, CubicUpperBoundFailsBelowOne) {
  // Phi(0.9) = 0.0053605 > 0.005.
  EXPECT_NEAR(phi(0.9), -0.1 - std::log(0.9), 1e-15);
  EXPECT_GT(phi(0.9), 0.005);
  const auto rep = check_local_expansions(1.0, {0.02, 0.05, 0.1}, 20000, 5);
  for (const auto& row : rep.rows) {
    EXPECT_GT(row.est1_upper_violations, 0u);
    EXPECT_EQ(row.est1_upper_violations_v_ge_w, 0u);
    EXPECT_EQ(row.est1_lower_violations, 0u);
    EXPECT_EQ(row.corrected_upper_violations, 0u);
    EXPECT_GT(row.C_v_quad, 0.0);
    EXPECT_GT(row.C_p_quad, 0.0);
  }
  EXPECT_EQ(rep.est1_upper_delta_max, 0.0);
  EXPECT_EQ(rep.corrected_upper_delta_max, 0.1);
  EXPECT_THROW(check_local_expansions(1.0, {1.5}, 10, 1), Error);
}

TEST(LocalExpansions, QuadraticConstantsApproachTwo) {
  // |v-w|^2/Phi -> 2 w^2 and |dp|^2/Phi -> 2/w^2 as delta -> 0.
  const auto rep = check_local_expansions(1.0, {0.01}, 20000, 9);
  EXPECT_NEAR(rep.rows[0].C_v_quad, 2.0, 0.1);
  EXPECT_NEAR(rep.rows[0].C_p_quad, 2.0, 0.1);
  EXPECT_NEAR(rep.rows[0].C_p_est1, 1.0, 0.1);
}
