#pragma once

// Viscous shock profiles (traveling waves) for the isothermal
// Navier-Stokes system, reduced to a scalar ODE by the two first integrals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "shocklab/error.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/model.hpp"

namespace shocklab {

/// Right-hand side of the profile ODE in the chord form
///   v' = v^{1+alpha} (chord(v) - p(v)) / sigma,
/// which for p = 1/v factors as sigma v^alpha (v - v_-)(v_+ - v).
inline double profile_rhs(double vt, const EndStates& s, const GasModel& m) {
  const double lo = std::min(s.v_minus, s.v_plus);
  const double hi = std::max(s.v_minus, s.v_plus);
  if (!(vt >= lo && vt <= hi)) {
    std::ostringstream os;
    os << "profile_rhs: v = " << vt << " outside [" << lo << ", " << hi << "]";
    throw domain_error("profile_range", os.str());
  }
  return s.sigma * std::pow(vt, m.alpha()) * (vt - s.v_minus) * (s.v_plus - vt);
}

/// The same ODE written literally with the secant of p; used as a cross-check.
inline double profile_rhs_chord(double vt, const EndStates& s, const GasModel& m) {
  const double slope = (s.p_plus() - s.p_minus()) / (s.v_plus - s.v_minus);
  const double chord = s.p_minus() + slope * (vt - s.v_minus);
  return std::pow(vt, 1.0 + m.alpha()) * (chord - 1.0 / vt) / s.sigma;
}

/// h~ from the first integral of the momentum profile equation.
inline double slaved_h(double vt, const EndStates& s) {
  return s.u_minus + (1.0 / vt - s.p_minus()) / s.sigma;
}

/// u~ from the first integral of the mass equation.
inline double slaved_u(double vt, const EndStates& s) {
  return s.u_minus - s.sigma * (vt - s.v_minus);
}

struct ShockProfile {
  Grid grid;
  Vec v_tilde, u_tilde, h_tilde, dv_tilde;
  EndStates end_states;
  GasModel model;
  double nu = 1.0;

  std::size_t size() const noexcept { return grid.size(); }
  double xi(std::size_t i) const noexcept { return grid.x(i); }
  double dx() const noexcept { return grid.dx(); }
};

struct ProfileOptions {
  double anchor_tol = 1e-8;
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  // Relative distance to an end state below which the profile is padded.
  double pad_tol = 1e-12;
  double nu = 1.0;
};

namespace detail {

using ProfileState = std::array<double, 1>;

// Integrate the logit z = log((v - v_-)/(v_+ - v)) of the profile, which obeys
// the non-degenerate ODE z' = sigma (v_+ - v_-) v^alpha, from s = 0 (z = 0)
// through the nonnegative increasing abscissae `s_out`.
inline void integrate_profile_branch(const EndStates& es, const GasModel& m, double dir,
                                     const std::vector<double>& s_out, std::vector<double>& out,
                                     const ProfileOptions& opt) {
  namespace odeint = boost::numeric::odeint;
  out.assign(s_out.size(), 0.0);
  if (s_out.empty()) return;
  const double jump = es.v_plus - es.v_minus;
  const double rate = es.sigma * jump;
  auto volume = [&](double z) {
    // Evaluated from the nearer end state to keep the tails accurate.
    if (z >= 0.0) return es.v_plus - jump / (1.0 + std::exp(z));
    return es.v_minus + jump / (1.0 + std::exp(-z));
  };
  auto sys = [&](const ProfileState& x, ProfileState& dxds, double) {
    dxds[0] = dir * rate * std::pow(volume(x[0]), m.alpha());
  };
  // A node sitting on the anchor itself is not integrated.
  std::size_t first = 0;
  while (first < s_out.size() && s_out[first] == 0.0) out[first++] = volume(0.0);
  if (first == s_out.size()) return;
  std::vector<double> times;
  times.reserve(s_out.size() - first + 1);
  times.push_back(0.0);
  for (std::size_t i = first; i < s_out.size(); ++i) times.push_back(s_out[i]);
  ProfileState x{0.0};
  std::size_t k = 0;
  auto observer = [&](const ProfileState& st, double) {
    if (k > 0) out[first + k - 1] = volume(st[0]);
    ++k;
  };
  try {
    auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol,
                                             odeint::runge_kutta_dopri5<ProfileState>());
    odeint::integrate_times(stepper, sys, x, times.begin(), times.end(), 0.1 / rate, observer);
  } catch (const std::exception& e) {
    throw numerical_error("profile_construction", std::string("profile integration failed: ") + e.what());
  }
  if (k != times.size()) throw numerical_error("profile_construction", "profile integration stopped early");
  for (double v : out) {
    if (!std::isfinite(v)) throw numerical_error("profile_construction", "non-finite profile value");
  }
}

}  // namespace detail

/// Build the viscous shock profile on the uniform grid [-L, L] with N nodes.
///
/// The ODE is integrated from the anchor v(0) = (v_- + v_+)/2 in both
/// directions with an adaptive Dormand-Prince pair and read off through its
/// dense output at the grid nodes.  The integration runs in the logit of v,
/// where the end states sit at z = -inf and z = +inf instead of being
/// degenerate fixed points.  Once v is within pad_tol*|v_+ - v_-| of an
/// end state the remaining nodes take that end state exactly.  For nu != 1
/// the nu = 1 profile is sampled at xi/nu.
inline ShockProfile build_profile(const EndStates& es, const GasModel& m, double L, std::size_t N,
                                  const ProfileOptions& opt = {}) {
  if (!(opt.nu > 0.0)) throw domain_error("nu_range", "viscosity parameter nu must be positive");
  if (N < 2) throw domain_error("grid_size", "profile grid needs N >= 2");
  if (!(es.eps * L / opt.nu >= 20.0)) {
    std::ostringstream os;
    os << "domain too short: eps*L/nu = " << es.eps * L / opt.nu << " < 20";
    throw domain_error("domain_too_short", os.str());
  }
  ShockProfile P;
  P.grid = Grid(L, N);
  P.end_states = es;
  P.model = m;
  P.nu = opt.nu;
  P.v_tilde.assign(N, 0.0);

  std::vector<std::size_t> pos_idx, neg_idx;
  std::vector<double> pos_s, neg_s;
  for (std::size_t i = 0; i < N; ++i) {
    const double s = P.grid.x(i) / opt.nu;
    if (s >= 0.0) {
      pos_idx.push_back(i);
      pos_s.push_back(s);
    }
  }
  for (std::size_t i = N; i-- > 0;) {
    const double s = P.grid.x(i) / opt.nu;
    if (s < 0.0) {
      neg_idx.push_back(i);
      neg_s.push_back(-s);
    }
  }
  std::vector<double> pos_v, neg_v;
  detail::integrate_profile_branch(es, m, +1.0, pos_s, pos_v, opt);
  detail::integrate_profile_branch(es, m, -1.0, neg_s, neg_v, opt);

  const double jump = std::abs(es.v_plus - es.v_minus);
  const double pad = opt.pad_tol * jump;
  bool padded = false;
  for (std::size_t k = 0; k < pos_idx.size(); ++k) {
    double v = pos_v[k];
    if (padded || std::abs(v - es.v_plus) < pad) {
      padded = true;
      v = es.v_plus;
    }
    P.v_tilde[pos_idx[k]] = v;
  }
  padded = false;
  for (std::size_t k = 0; k < neg_idx.size(); ++k) {
    double v = neg_v[k];
    if (padded || std::abs(v - es.v_minus) < pad) {
      padded = true;
      v = es.v_minus;
    }
    P.v_tilde[neg_idx[k]] = v;
  }

  P.u_tilde.resize(N);
  P.h_tilde.resize(N);
  P.dv_tilde.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double v = P.v_tilde[i];
    if (!std::isfinite(v)) throw numerical_error("profile_construction", "non-finite profile value");
    P.u_tilde[i] = slaved_u(v, es);
    P.h_tilde[i] = slaved_h(v, es);
    P.dv_tilde[i] = profile_rhs(v, es, m) / opt.nu;
  }

  const double s0 = P.grid.half_length() / P.grid.dx();
  const double v0 = lagrange4(P.v_tilde, s0, es.v_minus, es.v_plus);
  const double mid = 0.5 * (es.v_minus + es.v_plus);
  // Nodes near the centre carry the full ODE accuracy only to interpolation order.
  const double interp_err = std::pow(P.grid.dx() / opt.nu * std::abs(es.sigma) * jump, 4) * jump;
  if (std::abs(v0 - mid) > opt.anchor_tol + interp_err) {
    std::ostringstream os;
    os << "anchor v(0) = " << v0 << " misses midpoint " << mid;
    throw numerical_error("profile_construction", os.str());
  }
  return P;
}

struct ProfileResiduals {
  double ode = 0.0;         // max |D4 v - rhs(v)| over nodes with a full stencil
  double momentum = 0.0;    // max |-sigma D h + D p(v)|
  double slaving_u = 0.0;   // max |u - (u_- - sigma (v - v_-))|
  double slaving_h = 0.0;   // max |h - (u_- + (p(v) - p_-)/sigma)|
  double effective = 0.0;   // max |u - h - nu v' / v^{1+alpha}|
  double tail_left = 0.0;   // |v(-L) - v_-|
  double tail_right = 0.0;  // |v(L) - v_+|
};

/// Residuals of the profile equations on the grid.  The ODE residual uses the
/// fourth-order centred difference of the sampled profile.
inline ProfileResiduals profile_residuals(const ShockProfile& P) {
  ProfileResiduals r;
  const auto& es = P.end_states;
  const std::size_t n = P.size();
  const double dx = P.dx();
  const double alpha = P.model.alpha();
  const auto& v = P.v_tilde;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double d4 = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * dx);
    r.ode = std::max(r.ode, std::abs(d4 - P.dv_tilde[i]));
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dh = (P.h_tilde[i + 1] - P.h_tilde[i - 1]) / (2.0 * dx);
    const double dp = (1.0 / v[i + 1] - 1.0 / v[i - 1]) / (2.0 * dx);
    r.momentum = std::max(r.momentum, std::abs(-es.sigma * dh + dp));
  }
  for (std::size_t i = 0; i < n; ++i) {
    r.slaving_u = std::max(r.slaving_u, std::abs(P.u_tilde[i] - slaved_u(v[i], es)));
    r.slaving_h = std::max(r.slaving_h, std::abs(P.h_tilde[i] - slaved_h(v[i], es)));
    const double eff = P.u_tilde[i] - P.h_tilde[i] - P.nu * P.dv_tilde[i] / std::pow(v[i], 1.0 + alpha);
    r.effective = std::max(r.effective, std::abs(eff));
  }
  r.tail_left = std::abs(v.front() - es.v_minus);
  r.tail_right = std::abs(v.back() - es.v_plus);
  return r;
}

struct TailReport {
  double sup_dv = 0.0;
  double decay_rate_left = 0.0;
  double decay_rate_right = 0.0;
  double inf_dv_core = 0.0;
  double ratio_vh_max = 0.0;
  double sigma_gap = 0.0;
};

namespace detail {

// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / den;
}

}  // namespace detail

/// Structure of a small-amplitude profile: size and decay of v~', the
/// |v~'| ~ |h~'| relation, and the speed gap |sigma - 1/v_-|.
///
/// Decay rates fit log |v~'| against |xi| on the outer half of each side,
/// keeping only unpadded nodes with |v~'| above 1e-10 sup |v~'|.
inline TailReport verify_tails(const ShockProfile& P) {
  const auto& es = P.end_states;
  const std::size_t n = P.size();
  const double sgn = es.v_plus > es.v_minus ? 1.0 : -1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (sgn * (P.v_tilde[i + 1] - P.v_tilde[i]) < 0.0 || sgn * P.dv_tilde[i] < 0.0) {
      throw domain_error("invalid_profile", "profile is not monotone");
    }
  }
  TailReport T;
  for (double d : P.dv_tilde) T.sup_dv = std::max(T.sup_dv, std::abs(d));
  if (!(T.sup_dv > 0.0)) throw domain_error("invalid_profile", "profile has no transition");

  const double L = P.grid.half_length();
  const double cut = 1e-10 * T.sup_dv;
  auto fit = [&](bool right) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = P.xi(i);
      const double d = std::abs(P.dv_tilde[i]);
      if ((right ? x : -x) < 0.5 * L) continue;
      const double end = right ? es.v_plus : es.v_minus;
      if (P.v_tilde[i] == end || d <= cut) continue;
      xs.push_back(std::abs(x));
      ys.push_back(std::log(d));
    }
    if (xs.size() < 8) throw domain_error("invalid_profile", "too few tail samples to fit a decay rate");
    return -detail::ls_slope(xs, ys);
  };
  T.decay_rate_left = fit(false);
  T.decay_rate_right = fit(true);

  const double core = 1.0 / es.eps;
  T.inf_dv_core = std::numeric_limits<double>::infinity();
  const double sigma_star = es.sigma_star();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = P.xi(i);
    if (std::abs(x) <= core) T.inf_dv_core = std::min(T.inf_dv_core, std::abs(P.dv_tilde[i]));
    const double v = P.v_tilde[i];
    const double dh = -P.dv_tilde[i] / (v * v) / es.sigma;
    T.ratio_vh_max = std::max(T.ratio_vh_max, std::abs(sigma_star * P.dv_tilde[i] + dh));
  }
  T.sigma_gap = std::abs(std::abs(es.sigma) - sigma_star);
  return T;
}

/// Closed form of the alpha = 0 profile: a logistic curve in xi.
inline double logistic_profile(double xi, const EndStates& es, double nu = 1.0) {
  const double jump = es.v_plus - es.v_minus;
  return es.v_minus + jump / (1.0 + std::exp(-es.sigma * jump * xi / nu));
}

}  // namespace shocklab
