#include <cmath>

#include <gtest/gtest.h>

#include "shocklab/limits.hpp"

using namespace shocklab;

namespace {

SweepConfig small_sweep(double amp) {
  SweepConfig c;
  c.end_states = solve_rankine_hugoniot(1.0, 0.0, 0.1, Family::two);
  c.nu_list = {1.0, 0.5};
  c.L1 = 200.0;
  c.dx = 1.0;
  c.T = 2.0;
  if (amp != 0.0) {
    Bump b;
    b.amplitude = amp;
    b.width = 2.0;
    b.center = 5.0;
    c.perturbation.bumps.push_back(b);
  }
  return c;
}

}  // namespace

TEST(Mollify, PreservesMassAndConstants) {
  Vec f(201, 0.0);
  f[100] = 1.0;
  const Vec g = mollify(f, 8.0);
  double s = 0.0;
  for (double x : g) s += x;
  EXPECT_NEAR(s, 1.0, 1e-14);
  EXPECT_EQ(g[100 + 8], 0.0);
  EXPECT_GT(g[100 + 7], 0.0);
  const Vec c(50, 3.0);
  const Vec gc = mollify(c, 4.0);
  EXPECT_NEAR(gc[25], 3.0, 1e-14);
  EXPECT_EQ(mollify(c, 0.0), c);
}

TEST(PrepareInitial, ZeroPerturbationIsTheProfile) {
  const auto es = solve_rankine_hugoniot(1.0, 0.0, 0.1, Family::two);
  const ShockProfile P = build_profile(es, GasModel(0.5), 200.0, 801);
  const auto init = prepare_initial(0.25, P, {}, 0.25);
  EXPECT_EQ(init.state.v, P.v_tilde);
  EXPECT_EQ(init.state.h, P.h_tilde);
  EXPECT_EQ(init.E_nu, 0.0);
}

TEST(PrepareInitial, EffectiveVelocityCorrection) {
  // h - h~ = u-bump - nu_g (v_xi / v^{1+alpha} - v~' / v~^{1+alpha}).
  const auto es = solve_rankine_hugoniot(1.0, 0.0, 0.1, Family::two);
  const ShockProfile P = build_profile(es, GasModel(0.0), 200.0, 4001);
  PerturbationSpec spec;
  Bump b;
  b.amplitude = 0.1;
  b.width = 3.0;
  b.center = -10.0;
  spec.bumps.push_back(b);
  const auto init = prepare_initial(1.0, P, spec, 1.0);
  const Vec vx = derivative(init.state.v, P.dx());
  double err = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double oracle = P.h_tilde[i] - (vx[i] / init.state.v[i] - P.dv_tilde[i] / P.v_tilde[i]);
    err = std::max(err, std::abs(init.state.h[i] - oracle));
  }
  EXPECT_LT(err, 1e-4);
  EXPECT_GT(init.E_nu, 0.0);
}

TEST(PrepareInitial, Rejections) {
  const auto es = solve_rankine_hugoniot(1.0, 0.0, 0.1, Family::two);
  const ShockProfile P = build_profile(es, GasModel(0.0), 200.0, 801);
  PerturbationSpec deep;
  Bump b;
  b.amplitude = -2.0;
  b.width = 3.0;
  deep.bumps.push_back(b);
  EXPECT_THROW(prepare_initial(1.0, P, deep, 1.0), Error);
  PerturbationSpec wide;
  b.amplitude = 0.1;
  b.center = 95.0;
  wide.bumps.push_back(b);
  EXPECT_THROW(prepare_initial(1.0, P, wide, 1.0), Error);
}

TEST(EulerE0, MatchesClosedFormForUBump) {
  const auto es = solve_rankine_hugoniot(1.0, 0.0, 0.1, Family::two);
  PerturbationSpec spec;
  Bump b;
  b.field = BumpField::h;
  b.amplitude = 0.3;
  b.width = 2.0;
  spec.bumps.push_back(b);
  // int (A e^{-r^2})^2/2 = A^2 w sqrt(pi/2)/2.
  const double exact = 0.09 * 2.0 * std::sqrt(std::numbers::pi / 2.0) / 2.0;
  EXPECT_NEAR(euler_E0(es, spec, 50.0), exact, 1e-10);
  EXPECT_EQ(euler_E0(es, {}, 50.0), 0.0);
}

TEST(PrepareInitial, InitialEntropyConvergesToE0) {
  const auto es = solve_rankine_hugoniot(1.0, 0.0, 0.1, Family::two);
  PerturbationSpec spec;
  Bump b;
  b.amplitude = 0.2;
  b.width = 4.0;
  b.center = 10.0;
  spec.bumps.push_back(b);
  const double E0 = euler_E0(es, spec, 200.0);
  // The gap is signed (mollification and the viscous layer pull in opposite
  // directions), so check the envelope gap(nu) <= nu gap(1).
  double gap1 = 0.0;
  for (double nu : {1.0, 0.5, 0.25, 0.125}) {
    const ShockProfile P = build_profile(es, GasModel(0.0), 200.0 / nu, static_cast<std::size_t>(1600 / nu) + 1);
    const double gap = std::abs(prepare_initial(nu, P, spec, nu).E_nu - E0);
    if (nu == 1.0) gap1 = gap;
    EXPECT_LE(gap, nu * gap1) << "nu = " << nu;
  }
  EXPECT_GT(gap1, 0.0);
}

TEST(SweepConfig, Validation) {
  SweepConfig c = small_sweep(0.0);
  c.nu_list = {0.5, 0.25};
  EXPECT_THROW(c.validate(), Error);
  c.nu_list = {1.0, 0.5, 0.5};
  EXPECT_THROW(c.validate(), Error);
  c.nu_list = {1.0, 0.5};
  c.T = 0.0;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_EQ(small_sweep(0.0).nodes(0.5), 801u);
}

TEST(Sweep, ZeroDataGivesZeroShift) {
  const SweepReport r = run_sweep(small_sweep(0.0));
  EXPECT_EQ(r.E0, 0.0);
  ASSERT_EQ(r.members.size(), 2u);
  for (const auto& m : r.members) {
    EXPECT_FALSE(m.failed);
    for (double x : m.X) EXPECT_EQ(x, 0.0);
    EXPECT_EQ(m.drift_ratio, 0.0);
    EXPECT_EQ(m.T1 + m.T2 + m.T3, 0.0);
  }
  EXPECT_EQ(r.l1_gaps.at(0), 0.0);
}

TEST(Sweep, MemberTracesAreInPhysicalTime) {
  const SweepReport r = run_sweep(small_sweep(0.1));
  for (const auto& m : r.members) {
    ASSERT_FALSE(m.failed) << m.failure;
    EXPECT_NEAR(m.t.back(), 2.0, 1e-12);
    EXPECT_GT(m.T1, 0.0);
    EXPECT_TRUE(std::isfinite(m.drift_ratio));
  }
  EXPECT_TRUE(std::isfinite(r.l1_gaps.at(0)));
}

TEST(Sweep, FailingMemberIsAnnotated) {
  // The mollifier (radius 4 nu) pushes the nu = 1 data past L1/2 only.
  SweepConfig c = small_sweep(0.1);
  c.perturbation.bumps[0].center = 87.0;
  const SweepReport r = run_sweep(c);
  ASSERT_EQ(r.members.size(), 2u);
  EXPECT_TRUE(r.members[0].failed);
  EXPECT_FALSE(r.members[0].failure.empty());
  EXPECT_FALSE(r.members[1].failed);
  EXPECT_TRUE(std::isnan(r.l1_gaps.at(0)));
  EXPECT_FALSE(r.gaps_decreasing);
}

TEST(Rescaling, DirectAndRescaledAgree) {
  const RescalingCheck k = check_rescaling(small_sweep(0.1), 0.5);
  EXPECT_TRUE(k.pass);
  EXPECT_LE(k.field_diff, 1e-12);
  EXPECT_LE(k.shift_diff, 1e-10);
  EXPECT_GT(k.tolerance, 0.0);
}
