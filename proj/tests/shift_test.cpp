#include <cmath>

#include <gtest/gtest.h>

#include "shocklab/shift.hpp"
#include "support.hpp"

using namespace shocklab;

namespace {

ContractionConfig small_run(double amp, std::size_t N, double T = 10.0) {
  ContractionConfig c;
  c.sim.end_states = solve_rankine_hugoniot(1.0, 0.0, 0.1, Family::two);
  c.sim.model = GasModel(0.0);
  c.sim.L = 400.0;
  c.sim.N = N;
  c.sim.T = T;
  if (amp != 0.0) {
    Bump b;
    b.amplitude = amp;
    b.width = 5.0;
    c.sim.perturbation.bumps.push_back(b);
  }
  return c;
}

}  // namespace

TEST(PhiEps, Examples) {
  EXPECT_EQ(phi_eps(0.0, 0.1), 0.0);
  EXPECT_NEAR(phi_eps(0.02, 0.1), -100.0, 1e-10);
  EXPECT_NEAR(phi_eps(0.005, 0.1), -50.0, 1e-10);
  EXPECT_THROW(phi_eps(0.0, 0.0), Error);
}

TEST(PhiEps, OddBoundedContinuous) {
  testsupport::Gen g(4);
  for (int k = 0; k < 1000; ++k) {
    const double eps = g.log_uniform(1e-3, 0.5);
    const double y = g.uniform(-3.0, 3.0) * eps * eps;
    EXPECT_DOUBLE_EQ(phi_eps(-y, eps), -phi_eps(y, eps));
    EXPECT_LE(std::abs(phi_eps(y, eps)), 1.0 / (eps * eps) * (1.0 + 1e-15));
  }
  const double e = 0.1;
  EXPECT_EQ(phi_eps(e * e, e), -1.0 / (e * e));
  EXPECT_EQ(phi_eps(-e * e, e), 1.0 / (e * e));
}

TEST(ShiftRhs, SteadyProfileDoesNotMove) {
  const auto c = small_run(0.0, 1024);
  const ShockProfile P = build_profile(c.sim.end_states, c.sim.model, c.sim.L, c.sim.N);
  const ShiftRate r = shift_rhs(profile_state(P), 0.0, P, build_weight(P, 0.1), 0.1);
  EXPECT_EQ(r.X_dot, 0.0);
  EXPECT_EQ(r.f_bound, 0.0);
  EXPECT_THROW(shift_rhs(profile_state(P), 0.3 * P.grid.half_length(), P, build_weight(P, 0.1), 0.1), Error);
}

TEST(ShiftRhs, PlateauBranch) {
  const double eps = 0.1;
  const ShiftRate r = shift_rate_from(2.0 * eps * eps, 0.0, 0.0, eps);
  EXPECT_NEAR(r.X_dot, -1.0 / (eps * eps), 1e-10);
}

TEST(ShiftRhs, VelocityBound) {
  const auto c = small_run(0.0, 1024);
  const ShockProfile P = build_profile(c.sim.end_states, c.sim.model, c.sim.L, c.sim.N);
  const Weight W = build_weight(P, 0.1);
  testsupport::Gen g(17);
  for (int k = 0; k < 20; ++k) {
    PerturbationSpec spec;
    Bump b;
    b.field = k % 2 ? BumpField::h : BumpField::v;
    b.amplitude = g.uniform(-0.3, 0.3);
    b.width = g.uniform(2.0, 20.0);
    b.center = g.uniform(-50.0, 50.0);
    spec.bumps.push_back(b);
    const FieldState s = perturbed_profile(P, spec);
    const double X = g.uniform(-20.0, 20.0);
    const ShiftRate r = shift_rhs(s, X, P, W, 0.1);
    const double eps = c.sim.end_states.eps;
    EXPECT_LE(std::abs(r.X_dot), (2.0 * std::abs(r.J_bad) + 2.0 * std::abs(r.J_para) + 1.0) / (eps * eps) * (1 + 1e-14));
    const FunctionalReport full = decompose(shifted_field(s, X, c.sim.end_states), P, W, 0.1);
    EXPECT_NEAR(r.Y, full.Y, 1e-14 * y_scale(full));
  }
}

TEST(Contraction, ZeroPerturbationIsInert) {
  const auto res = run_contraction(small_run(0.0, 1024, 20.0));
  for (std::size_t n = 0; n < res.trace.size(); ++n) {
    EXPECT_EQ(res.trace.X[n], 0.0);
    EXPECT_EQ(res.trace.wre[n], 0.0);
  }
  EXPECT_TRUE(res.verdict.pass);
}

TEST(Contraction, BumpDecaysMonotonically) {
  const auto res = run_contraction(small_run(0.05, 1024));
  const auto& tr = res.trace;
  ASSERT_GT(tr.size(), 10u);
  EXPECT_TRUE(res.verdict.pass);
  EXPECT_LT(tr.wre.back(), tr.wre.front());
  for (std::size_t n = 1; n < tr.size(); ++n) {
    EXPECT_GT(tr.times[n], tr.times[n - 1]);
    EXPECT_GE(tr.gv_accum[n], tr.gv_accum[n - 1]);
    EXPECT_GE(tr.d_accum[n], tr.d_accum[n - 1]);
    // Discrete absolute continuity of X.
    const double dt = tr.times[n] - tr.times[n - 1];
    const double vmax = std::max(std::abs(tr.X_dot[n]), std::abs(tr.X_dot[n - 1]));
    EXPECT_LE(std::abs(tr.X[n] - tr.X[n - 1]), 2.0 * dt * vmax + 1e-12);
  }
  EXPECT_GT(res.verdict.f_ratio, 0.0);
  EXPECT_LE(res.verdict.max_contem0, res.verdict.slack);
}

TEST(Contraction, IdentityResidualConverges) {
  const double r1 = run_contraction(small_run(0.05, 1024, 5.0)).verdict.max_identity_residual;
  const double r2 = run_contraction(small_run(0.05, 2048, 5.0)).verdict.max_identity_residual;
  EXPECT_GT(r1 / r2, 2.0);
}

TEST(Contraction, RejectsFamilyOne) {
  auto c = small_run(0.0, 257, 1.0);
  c.sim.end_states = solve_rankine_hugoniot(1.0, 0.0, 0.1, Family::one);
  EXPECT_THROW(run_contraction(c), Error);
}
