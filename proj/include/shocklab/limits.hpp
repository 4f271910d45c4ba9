#pragma once

// Vanishing-viscosity sweeps.  The nu-problem on [0, T] is the nu = 1 problem
// on [0, T/nu] with data dilated by 1/nu, so every member runs the nu = 1
// solver on a grid of half-length L1/nu and X_nu(t) = nu X(t/nu).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "shocklab/dynamics.hpp"
#include "shocklab/functionals.hpp"
#include "shocklab/shift.hpp"

namespace shocklab {

struct SweepConfig {
  EndStates end_states;
  GasModel model;
  std::vector<double> nu_list{1.0, 0.5, 0.25, 0.125};
  // Perturbation of the Euler data (v0, u0) in physical coordinates; the h
  // field of a bump perturbs u0.
  PerturbationSpec perturbation;
  double T = 10.0;
  double L1 = 200.0;  // half-length at nu = 1; L_nu = L1/nu in rescaled units
  double dx = 0.25;   // rescaled grid spacing
  double lambda = 0.1, delta3 = 0.1, delta0 = 0.05, shift_cfl = 0.25;
  SolverOptions solver;

  void validate() const {
    if (nu_list.empty()) throw domain_error("nu_list", "nu_list is empty");
    if (nu_list.front() != 1.0) throw domain_error("nu_list", "nu_list must start at 1");
    for (std::size_t k = 1; k < nu_list.size(); ++k) {
      if (!(nu_list[k] > 0.0 && nu_list[k] < nu_list[k - 1])) {
        throw domain_error("nu_list", "nu_list must be positive and strictly decreasing");
      }
    }
    if (!(T > 0.0)) throw domain_error("time_range", "sweep horizon must be positive");
    if (!(L1 > 0.0 && dx > 0.0 && dx < L1)) throw domain_error("grid_policy", "need 0 < dx < L1");
  }

  /// Nodes of the member grid: L1/nu rounded to a whole number of cells.
  std::size_t nodes(double nu) const {
    const double cells = std::round(2.0 * L1 / nu / dx);
    return static_cast<std::size_t>(cells) + 1;
  }
};

/// Smooth compactly supported kernel exp(-1/(1 - r^2)) on |r| < 1.
inline double mollifier_kernel(double r) {
  return std::abs(r) < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
}

/// Discrete convolution with the kernel of radius `radius` grid units,
/// normalized to unit discrete mass.  Zero outside the array.
inline Vec mollify(const Vec& f, double radius) {
  if (!(radius > 0.0)) return f;
  const long m = static_cast<long>(std::ceil(radius));
  Vec w(static_cast<std::size_t>(2 * m + 1));
  double tot = 0.0;
  for (long k = -m; k <= m; ++k) tot += w[static_cast<std::size_t>(k + m)] = mollifier_kernel(k / radius);
  for (double& x : w) x /= tot;
  const long n = static_cast<long>(f.size());
  Vec out(f.size(), 0.0);
  for (long i = 0; i < n; ++i) {
    double s = 0.0;
    for (long k = -m; k <= m; ++k) {
      const long j = i + k;
      if (j >= 0 && j < n) s += w[static_cast<std::size_t>(k + m)] * f[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

struct PreparedInitial {
  FieldState state;
  double E_nu = 0.0;  // nu-level BD relative entropy of the data against the profile
};

/// Well-prepared data at viscosity nu on the grid of P: profile plus the
/// Euler perturbation mollified at width 8 nu, with the effective velocity
/// h0 = u0 - nu_g (v0)_xi / v0^{1+alpha}.
///
/// `scale` is the physical length of one grid-coordinate unit: nu on a
/// rescaled (P.nu = 1) grid, 1 on a direct grid with P.nu = nu.
inline PreparedInitial prepare_initial(double nu, const ShockProfile& P, const PerturbationSpec& pert, double scale,
                                       double positivity_floor = 1e-6) {
  const double L = P.grid.half_length();
  const double radius_units = 4.0 * nu / scale;
  for (const auto& b : pert.bumps) {
    if (!(b.width > 0.0)) throw domain_error("bump_width", "bump width must be positive");
    const double reach = (Bump::support_widths() * b.width) / scale + radius_units;
    if (std::abs(b.center / scale) + reach > 0.5 * L) {
      throw domain_error("bump_support", "mollified perturbation does not fit inside [-L/2, L/2]");
    }
  }
  const std::size_t n = P.size();
  Vec dv(n, 0.0), du(n, 0.0);
  for (const auto& b : pert.bumps) {
    Vec& f = b.field == BumpField::v ? dv : du;
    for (std::size_t i = 0; i < n; ++i) f[i] += b(scale * P.xi(i));
  }
  const double radius_nodes = radius_units / P.dx();
  dv = mollify(dv, radius_nodes);
  du = mollify(du, radius_nodes);
  const Vec ddv = derivative(dv, P.dx());
  const double ap1 = 1.0 + P.model.alpha();
  PreparedInitial out;
  FieldState& s = out.state;
  s = profile_state(P);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = P.v_tilde[i] + dv[i];
    if (!(v > positivity_floor)) throw domain_error("positivity", "perturbed initial volume reaches the floor");
    s.v[i] = v;
    const double corr = (P.dv_tilde[i] + ddv[i]) / std::pow(v, ap1) - P.dv_tilde[i] / std::pow(P.v_tilde[i], ap1);
    s.h[i] = P.h_tilde[i] + du[i] - P.nu * corr;
  }
  out.E_nu = scale * eta_rel(s.v, s.h, P.v_tilde, P.h_tilde, P.dx()).integral;
  return out;
}

/// E0 = int eta((v0, u0) | (v-bar, u-bar)) for the Riemann step plus the
/// perturbation, by quadrature on [-L1, L1] with `n` nodes.
inline double euler_E0(const EndStates& es, const PerturbationSpec& pert, double L1, std::size_t n = 40001) {
  const RiemannShock R(es);
  const Grid g(L1, n);
  Vec f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.x(i);
    const auto [vb, ub] = R(x);
    double dv = 0.0, du = 0.0;
    for (const auto& b : pert.bumps) (b.field == BumpField::v ? dv : du) += b(x);
    const double v = vb + dv;
    require_positive_volume(v, "euler_E0");
    f[i] = phi(v / vb) + 0.5 * du * du;
  }
  return trapezoid(f, g.dx());
}

struct SweepMember {
  double nu = 1.0;
  double L = 0.0;      // rescaled half-length
  std::size_t N = 0;
  double E_nu = 0.0;   // nu-level initial BD quantity
  double ini_gap = 0.0;
  std::vector<double> t, X;  // physical time and X_nu(t) = nu X(t/nu)
  double T1 = 0.0;     // sup_t int eta(U^nu | U~^nu(. - X_nu))
  double T2 = 0.0;     // int_0^T int |v~^nu'| Phi
  double T3 = 0.0;     // nu int_0^T int v^beta |d_x(p - p~)|^2
  double drift_ratio = 0.0;
  double max_abs_X = 0.0;
  bool contraction_pass = false;
  bool failed = false;
  std::string failure;
  FieldState final_state;  // rescaled coordinates
};

struct SweepReport {
  double E0 = 0.0;
  std::vector<SweepMember> members;
  std::vector<double> l1_gaps;  // ||X_{nu_k} - X_{nu_{k+1}}||_{L1(0,T)}
  bool gaps_decreasing = false;
  double drift_C = 0.0;         // max drift ratio over members
  double triple_C = 0.0;        // max (T1 + T2 + T3)/E0
};

namespace detail {

inline ContractionConfig member_config(const SweepConfig& cfg, double T_rescaled) {
  ContractionConfig c;
  c.sim.end_states = cfg.end_states;
  c.sim.model = cfg.model;
  c.sim.T = T_rescaled;
  c.sim.solver = cfg.solver;
  c.lambda = cfg.lambda;
  c.delta3 = cfg.delta3;
  c.delta0 = cfg.delta0;
  c.shift_cfl = cfg.shift_cfl;
  return c;
}

inline double drift_ratio(double max_abs_X, const EndStates& es, double E0) {
  const double denom = std::sqrt(E0) + E0;
  if (denom == 0.0) return max_abs_X == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return max_abs_X * std::abs(es.v_minus - es.v_plus) / denom;
}

// L1 distance of two piecewise-linear traces on [0, T].
inline double l1_distance(const std::vector<double>& ta, const std::vector<double>& xa, const std::vector<double>& tb,
                          const std::vector<double>& xb, double T, std::size_t samples = 4001) {
  Vec d(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = T * static_cast<double>(k) / static_cast<double>(samples - 1);
    d[k] = std::abs(interp_linear(ta, xa, t) - interp_linear(tb, xb, t));
  }
  return trapezoid(d, T / static_cast<double>(samples - 1));
}

}  // namespace detail

/// One member of the sweep via the rescaled nu = 1 problem.
inline SweepMember run_member(const SweepConfig& cfg, double nu, double E0) {
  SweepMember m;
  m.nu = nu;
  m.L = cfg.L1 / nu;
  m.N = cfg.nodes(nu);
  const ShockProfile P = build_profile(cfg.end_states, cfg.model, m.L, m.N);
  const PreparedInitial init = prepare_initial(nu, P, cfg.perturbation, nu, cfg.solver.positivity_floor);
  m.E_nu = init.E_nu;
  m.ini_gap = std::abs(init.E_nu - E0);
  const ContractionResult r = run_contraction(P, init.state, detail::member_config(cfg, cfg.T / nu));
  const auto& tr = r.trace;
  m.t.resize(tr.size());
  m.X.resize(tr.size());
  for (std::size_t n = 0; n < tr.size(); ++n) {
    m.t[n] = nu * tr.times[n];
    m.X[n] = nu * tr.X[n];
    m.max_abs_X = std::max(m.max_abs_X, std::abs(m.X[n]));
  }
  double t2 = 0.0, t3 = 0.0;
  for (std::size_t n = 0; n < tr.size(); ++n) {
    m.T1 = std::max(m.T1, nu * r.reports[n].eta_plain);
    if (n > 0) {
      const double ds = tr.times[n] - tr.times[n - 1];
      t2 += 0.5 * ds * (r.reports[n].dv_phi + r.reports[n - 1].dv_phi);
      t3 += 0.5 * ds * (r.reports[n].D_plain + r.reports[n - 1].D_plain);
    }
  }
  m.T2 = nu * t2;
  m.T3 = nu * t3;
  m.drift_ratio = detail::drift_ratio(m.max_abs_X, cfg.end_states, E0);
  m.contraction_pass = r.verdict.pass;
  m.final_state = r.final_state;
  return m;
}

/// Runs every member; a failing member is annotated and the rest continue.
inline SweepReport run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepReport rep;
  rep.E0 = euler_E0(cfg.end_states, cfg.perturbation, cfg.L1);
  for (double nu : cfg.nu_list) {
    try {
      rep.members.push_back(run_member(cfg, nu, rep.E0));
    } catch (const Error& e) {
      SweepMember m;
      m.nu = nu;
      m.failed = true;
      m.failure = e.what();
      rep.members.push_back(std::move(m));
    }
  }
  rep.gaps_decreasing = rep.members.size() >= 3;
  for (std::size_t k = 0; k + 1 < rep.members.size(); ++k) {
    const auto& a = rep.members[k];
    const auto& b = rep.members[k + 1];
    if (a.failed || b.failed) {
      rep.l1_gaps.push_back(std::numeric_limits<double>::quiet_NaN());
      rep.gaps_decreasing = false;
      continue;
    }
    rep.l1_gaps.push_back(detail::l1_distance(a.t, a.X, b.t, b.X, cfg.T));
    if (rep.l1_gaps.size() >= 2 && !(rep.l1_gaps.back() < rep.l1_gaps[rep.l1_gaps.size() - 2])) {
      rep.gaps_decreasing = false;
    }
  }
  for (const auto& m : rep.members) {
    if (m.failed) continue;
    rep.drift_C = std::max(rep.drift_C, m.drift_ratio);
    if (rep.E0 > 0.0) rep.triple_C = std::max(rep.triple_C, (m.T1 + m.T2 + m.T3) / rep.E0);
  }
  return rep;
}

struct RescalingCheck {
  double field_diff = 0.0;   // max |U_direct - U_rescaled| at T
  double shift_diff = 0.0;   // max |X_direct - nu X_rescaled|
  double tolerance = 0.0;    // max |U_rescaled(N) - U_rescaled(N/2)| at shared nodes
  bool pass = false;
};

/// Solves the nu-problem directly (P.nu = nu on [-L1, L1] with spacing
/// nu dx) and compares with the rescaled nu = 1 run at the same resolution.
inline RescalingCheck check_rescaling(const SweepConfig& cfg, double nu) {
  cfg.validate();
  RescalingCheck out;
  const std::size_t N = cfg.nodes(nu);
  if (N % 2 == 0) throw domain_error("grid_policy", "rescaling check needs an odd node count");

  const ShockProfile Pr = build_profile(cfg.end_states, cfg.model, cfg.L1 / nu, N);
  const auto rr = run_contraction(Pr, prepare_initial(nu, Pr, cfg.perturbation, nu, cfg.solver.positivity_floor).state,
                                  detail::member_config(cfg, cfg.T / nu));

  ProfileOptions popt;
  popt.nu = nu;
  const ShockProfile Pd = build_profile(cfg.end_states, cfg.model, cfg.L1, N, popt);
  const auto rd = run_contraction(Pd, prepare_initial(nu, Pd, cfg.perturbation, 1.0, cfg.solver.positivity_floor).state,
                                  detail::member_config(cfg, cfg.T));

  out.field_diff = std::max(max_abs_diff(rd.final_state.v, rr.final_state.v),
                            max_abs_diff(rd.final_state.h, rr.final_state.h));
  const std::size_t m = std::min(rd.trace.size(), rr.trace.size());
  for (std::size_t n = 0; n < m; ++n) {
    out.shift_diff = std::max(out.shift_diff, std::abs(rd.trace.X[n] - nu * rr.trace.X[n]));
  }
  if (rd.trace.size() != rr.trace.size()) out.shift_diff = std::numeric_limits<double>::infinity();

  const std::size_t Nh = (N - 1) / 2 + 1;
  const ShockProfile Ph = build_profile(cfg.end_states, cfg.model, cfg.L1 / nu, Nh);
  const auto rh = run_contraction(Ph, prepare_initial(nu, Ph, cfg.perturbation, nu, cfg.solver.positivity_floor).state,
                                  detail::member_config(cfg, cfg.T / nu));
  for (std::size_t j = 0; j < Nh; ++j) {
    out.tolerance = std::max({out.tolerance, std::abs(rh.final_state.v[j] - rr.final_state.v[2 * j]),
                              std::abs(rh.final_state.h[j] - rr.final_state.h[2 * j])});
  }
  out.pass = out.field_diff <= out.tolerance;
  return out;
}

}  // namespace shocklab
