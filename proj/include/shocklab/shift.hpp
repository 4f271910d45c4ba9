#pragma once

// The shift ODE X' = Phi_eps(Y(U^X)) (2|J_bad| + 2|J_para| + 1) co-integrated
// with the PDE, and the contraction monitor built on it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "shocklab/dynamics.hpp"
#include "shocklab/functionals.hpp"

namespace shocklab {

/// 1/eps^2 below -eps^2, -y/eps^4 in between, -1/eps^2 above eps^2.
inline double phi_eps(double y, double eps) {
  if (!(eps > 0.0)) throw domain_error("eps_range", "phi_eps needs eps > 0");
  const double e2 = eps * eps;
  if (y <= -e2) return 1.0 / e2;
  if (y >= e2) return -1.0 / e2;
  return -y / (e2 * e2);
}

struct ShiftRate {
  double X_dot = 0.0;
  double f_bound = 0.0;  // 2|J_bad| + 2|J_para|
  double Y = 0.0, J_bad = 0.0, J_para = 0.0;
};

inline ShiftRate shift_rate_from(double Y, double J_bad, double J_para, double eps) {
  ShiftRate r;
  r.Y = Y;
  r.J_bad = J_bad;
  r.J_para = J_para;
  r.f_bound = 2.0 * std::abs(J_bad) + 2.0 * std::abs(J_para);
  r.X_dot = phi_eps(Y, eps) * (r.f_bound + 1.0);
  return r;
}

/// Evaluates the shift velocity on raw (unshifted) fields.
class ShiftDriver {
 public:
  explicit ShiftDriver(const FunctionalEvaluator& ev) : ev_(&ev) {}

  ShiftRate operator()(const Vec& v, const Vec& h, double X) const {
    const auto& P = ev_->profile();
    const auto& es = P.end_states;
    require_shift_window(X, P.grid.half_length());
    shift_values(v, X, P.dx(), es.v_minus, es.v_plus, sv_);
    shift_values(h, X, P.dx(), es.h_minus(), es.h_plus(), sh_);
    const auto t = ev_->shift_terms(sv_, sh_);
    return shift_rate_from(t.Y, t.J_bad, t.J_para, es.eps);
  }

 private:
  const FunctionalEvaluator* ev_;
  mutable Vec sv_, sh_;
};

inline ShiftRate shift_rhs(const FieldState& s, double X, const ShockProfile& P, const Weight& W, double delta3) {
  const FunctionalEvaluator ev(P, W, delta3);
  return ShiftDriver(ev)(s.v, s.h, X);
}

/// S0 = int a (v~'^2/v~^2 + h~'^2), the rate dY/dX at U = U~.
inline double shift_stiffness(const ShockProfile& P, const Weight& W) {
  Vec f(P.size());
  const double sigma = P.end_states.sigma;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double v = P.v_tilde[i];
    const double dp = P.dv_tilde[i] / (v * v);
    f[i] = W.a[i] * (P.dv_tilde[i] * P.dv_tilde[i] / (v * v) + dp * dp / (sigma * sigma));
  }
  return trapezoid(f, P.dx());
}

struct ContractionConfig {
  SimulationConfig sim;
  double lambda = 0.1;
  double delta3 = 0.1;
  double delta0 = 0.05;
  // dt <= shift_cfl * eps^4 / (S0 (2|J_bad| + 2|J_para| + 1)).
  double shift_cfl = 0.25;
};

struct ShiftTrace {
  std::vector<double> times, X, X_dot, wre, gv_accum, d_accum, identity_residual, f_bound;
  std::vector<double> Y, J_bad, J_para, J_good;
  std::vector<double> contem0;     // X' Y + J_bad + J_para - J_good
  std::vector<double> main_value;  // R(U) where |Y| <= eps^2, else 0
  std::vector<double> main_scale;

  std::size_t size() const { return times.size(); }
};

struct ContractionVerdict {
  bool pass = true;
  std::optional<double> first_violation;
  double slack = 0.0;                   // 10 x max identity residual
  double max_identity_residual = 0.0;   // over interior monitor times
  double max_wre_increase_rate = 0.0;   // max (wre_{n+1} - wre_n)/dt_n
  double max_contem0 = -std::numeric_limits<double>::infinity();
  double f_integral = 0.0;
  double f_ratio = 0.0;                 // int f dt / ((lambda/(delta0 eps)) wre(0))
  double max_main_ratio = -std::numeric_limits<double>::infinity();  // max R/scale
  std::size_t main_samples = 0;
  bool wre_monotone = true;
  bool contem0_ok = true;
};

struct ContractionResult {
  ShiftTrace trace;
  ContractionVerdict verdict;
  std::vector<FunctionalReport> reports;
  std::vector<MonitorRecord> monitors;
  FieldState final_state;
  double final_X = 0.0;
  std::size_t steps = 0;
};

namespace detail {

// Centred derivative on a nonuniform grid at interior index n.
inline double centred_rate(const std::vector<double>& t, const std::vector<double>& f, std::size_t n) {
  const double h1 = t[n] - t[n - 1], h2 = t[n + 1] - t[n];
  return -h2 / (h1 * (h1 + h2)) * f[n - 1] + (h2 - h1) / (h1 * h2) * f[n] + h1 / (h2 * (h1 + h2)) * f[n + 1];
}

inline void finalize_verdict(ShiftTrace& tr, const std::vector<FunctionalReport>& reports, ContractionVerdict& v,
                             double eps, double lambda, double delta0) {
  const std::size_t m = tr.size();
  tr.identity_residual.assign(m, 0.0);
  tr.gv_accum.assign(m, 0.0);
  tr.d_accum.assign(m, 0.0);
  if (m >= 3) {
    for (std::size_t n = 1; n + 1 < m; ++n) {
      const double rate = centred_rate(tr.times, tr.wre, n);
      tr.identity_residual[n] = std::abs(rate - tr.contem0[n]);
      v.max_identity_residual = std::max(v.max_identity_residual, tr.identity_residual[n]);
    }
    // One-sided at the two ends; excluded from the slack estimate.
    tr.identity_residual[0] =
        std::abs((tr.wre[1] - tr.wre[0]) / (tr.times[1] - tr.times[0]) - tr.contem0[0]);
    tr.identity_residual[m - 1] =
        std::abs((tr.wre[m - 1] - tr.wre[m - 2]) / (tr.times[m - 1] - tr.times[m - 2]) - tr.contem0[m - 1]);
  }
  v.slack = 10.0 * v.max_identity_residual;
  for (std::size_t n = 1; n < m; ++n) {
    const double dt = tr.times[n] - tr.times[n - 1];
    tr.gv_accum[n] = tr.gv_accum[n - 1] + 0.5 * dt * (reports[n].Gv + reports[n - 1].Gv);
    tr.d_accum[n] = tr.d_accum[n - 1] + 0.5 * dt * (reports[n].D + reports[n - 1].D);
    v.f_integral += 0.5 * dt * (tr.f_bound[n] + tr.f_bound[n - 1]);
    const double inc = (tr.wre[n] - tr.wre[n - 1]) / dt;
    v.max_wre_increase_rate = std::max(v.max_wre_increase_rate, inc);
    if (tr.wre[n] - tr.wre[n - 1] > v.slack * dt) {
      v.wre_monotone = false;
      if (!v.first_violation) v.first_violation = tr.times[n];
    }
  }
  for (std::size_t n = 0; n < m; ++n) {
    v.max_contem0 = std::max(v.max_contem0, tr.contem0[n]);
    if (tr.contem0[n] > v.slack) {
      v.contem0_ok = false;
      if (!v.first_violation || tr.times[n] < *v.first_violation) v.first_violation = tr.times[n];
    }
  }
  const double denom = lambda / (delta0 * eps) * (m ? tr.wre[0] : 0.0);
  v.f_ratio = denom > 0.0 ? v.f_integral / denom : 0.0;
  v.pass = v.wre_monotone && v.contem0_ok;
}

}  // namespace detail

/// Runs the PDE from `initial` with the co-integrated shift and records the
/// trace at every time step.  Uses T, solver and the functional parameters of
/// `cfg`; the profile fixes the grid.
inline ContractionResult run_contraction(const ShockProfile& P, FieldState initial, const ContractionConfig& cfg) {
  const auto& sc = cfg.sim;
  if (!(sc.T >= 0.0)) throw domain_error("time_range", "final time must be nonnegative");
  if (!(cfg.delta0 > 0.0 && cfg.delta0 < 1.0)) throw domain_error("delta0_range", "delta0 must lie in (0,1)");
  if (!(cfg.shift_cfl > 0.0)) throw domain_error("shift_cfl", "shift_cfl must be positive");
  if (P.end_states.family != Family::two) {
    throw domain_error("family", "the contraction monitor is implemented for 2-shocks");
  }
  const Weight W = build_weight(P, cfg.lambda);
  const FunctionalEvaluator ev(P, W, cfg.delta3);
  const ShiftDriver drive(ev);
  const double eps = P.end_states.eps;
  const double S0 = shift_stiffness(P, W);

  Simulation sim(P, std::move(initial), sc.solver);
  ContractionResult res;
  double X = 0.0;
  auto& tr = res.trace;
  Vec sv, sh;
  auto record = [&](double t) {
    shift_values(sim.state().v, X, P.dx(), P.end_states.v_minus, P.end_states.v_plus, sv);
    shift_values(sim.state().h, X, P.dx(), P.end_states.h_minus(), P.end_states.h_plus(), sh);
    const FunctionalReport r = ev.decompose(sv, sh);
    const ShiftRate sr = shift_rate_from(r.Y, r.J_bad, r.J_para, eps);
    tr.times.push_back(t);
    tr.X.push_back(X);
    tr.X_dot.push_back(sr.X_dot);
    tr.wre.push_back(r.wre);
    tr.f_bound.push_back(sr.f_bound);
    tr.Y.push_back(r.Y);
    tr.J_bad.push_back(r.J_bad);
    tr.J_para.push_back(r.J_para);
    tr.J_good.push_back(r.J_good);
    tr.contem0.push_back(sr.X_dot * r.Y + r.J_bad + r.J_para - r.J_good);
    const MainCombination mc = main_combination(r, eps, cfg.lambda, cfg.delta0);
    tr.main_value.push_back(mc.applicable ? mc.value : 0.0);
    tr.main_scale.push_back(mc.applicable ? mc.scale : 0.0);
    if (mc.applicable && mc.scale > 0.0) {
      ++res.verdict.main_samples;
      res.verdict.max_main_ratio = std::max(res.verdict.max_main_ratio, mc.value / mc.scale);
    }
    res.reports.push_back(r);
    return sr;
  };

  ShiftRate sr = record(0.0);
  const TimeGrid tg(sc.T, 0.0);
  const Solver::ScalarRhs g = [&](const Vec& v, const Vec& h, double Xs) { return drive(v, h, Xs).X_dot; };
  while (sc.T > 0.0 && !tg.done(sim.state().t)) {
    double dt_max = sim.dt();
    if (S0 > 0.0) dt_max = std::min(dt_max, cfg.shift_cfl * std::pow(eps, 4) / (S0 * (sr.f_bound + 1.0)));
    bool hit = false;
    const double dt = tg.next(sim.state().t, dt_max, hit);
    res.monitors.push_back(sim.advance(dt, &X, g));
    ++res.steps;
    sr = record(sim.state().t);
  }
  detail::finalize_verdict(tr, res.reports, res.verdict, eps, cfg.lambda, cfg.delta0);
  res.final_state = sim.state();
  res.final_X = X;
  return res;
}

inline ContractionResult run_contraction(const ContractionConfig& cfg) {
  const auto& sc = cfg.sim;
  if (sc.end_states.family != Family::two) {
    throw domain_error("family", "the contraction monitor is implemented for 2-shocks");
  }
  ProfileOptions popt;
  popt.nu = sc.nu;
  const ShockProfile P = build_profile(sc.end_states, sc.model, sc.L, sc.N, popt);
  return run_contraction(P, perturbed_profile(P, sc.perturbation), cfg);
}

}  // namespace shocklab
