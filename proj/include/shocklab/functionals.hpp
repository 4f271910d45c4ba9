#pragma once

// Weighted relative-entropy functionals around a viscous shock: the weight,
// the Y / J decomposition of d/dt int a eta(U^X | U~), the delta-split into
// bad and good terms, truncations, normalized variables, the Jacobian
// identity and the empirical estimate ledger.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shocklab/dynamics.hpp"
#include "shocklab/error.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/model.hpp"
#include "shocklab/profiles.hpp"

namespace shocklab {

struct Weight {
  Vec a, a_prime;
  double lambda = 0.0;
};

/// a = 1 - (lambda/eps)(p(v~) - p_-), a' = -(lambda/eps) d/dxi p(v~).
inline Weight build_weight(const ShockProfile& P, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw domain_error("lambda_range", "weight variation lambda must lie in (0,1)");
  const auto& es = P.end_states;
  const double k = lambda / es.eps;
  Weight W;
  W.lambda = lambda;
  W.a.resize(P.size());
  W.a_prime.resize(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double v = P.v_tilde[i];
    W.a[i] = 1.0 - k * (1.0 / v - es.p_minus());
    W.a_prime[i] = k * P.dv_tilde[i] / (v * v);
  }
  return W;
}

/// Pointwise relative entropy Phi(v1/v2) + (w1 - w2)^2/2 of two (v, velocity)
/// fields together with its trapezoid integral.
struct RelEntropy {
  Vec density;
  double integral = 0.0;
};

inline RelEntropy eta_rel(const Vec& v1, const Vec& w1, const Vec& v2, const Vec& w2, double dx) {
  require_same_size(v1.size(), v2.size(), "eta_rel");
  require_same_size(w1.size(), w2.size(), "eta_rel");
  require_same_size(v1.size(), w1.size(), "eta_rel");
  RelEntropy r;
  r.density.resize(v1.size());
  for (std::size_t i = 0; i < v1.size(); ++i) {
    require_positive_volume(v1[i], "eta_rel");
    require_positive_volume(v2[i], "eta_rel");
    const double d = w1[i] - w2[i];
    r.density[i] = phi(v1[i] / v2[i]) + 0.5 * d * d;
  }
  r.integral = trapezoid(r.density, dx);
  return r;
}

/// Effective velocity h = u - nu v_xi / v^{1+alpha} of a (v, u) field.
inline Vec effective_velocity(const Vec& v, const Vec& u, double nu, double alpha, double dx) {
  const Vec dv = derivative(v, dx);
  Vec h(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) h[i] = u[i] - nu * dv[i] / std::pow(v[i], 1.0 + alpha);
  return h;
}

/// BD relative entropy: eta_rel applied to the effective velocities.
inline double bd_rel_E(const Vec& v1, const Vec& u1, const Vec& v2, const Vec& u2, double nu, double alpha,
                       double dx) {
  return eta_rel(v1, effective_velocity(v1, u1, nu, alpha, dx), v2, effective_velocity(v2, u2, nu, alpha, dx), dx)
      .integral;
}

/// out[i] = f(x_i + X) by four-point Lagrange interpolation; samples beyond
/// the grid take the far-field constants.
inline void shift_values(const Vec& f, double X, double dx, double left, double right, Vec& out) {
  const long n = static_cast<long>(f.size());
  out.resize(f.size());
  const double q = X / dx;
  const double fl = std::floor(q);
  const long j = static_cast<long>(fl);
  const double t = q - fl;
  auto at = [&](long k) { return k < 0 ? left : (k >= n ? right : f[static_cast<std::size_t>(k)]); };
  if (t == 0.0) {
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = at(i + j);
    return;
  }
  const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0, w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
               w2 = -(t + 1.0) * t * (t - 2.0) / 2.0, w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  for (long i = 0; i < n; ++i) {
    const long b = i + j;
    double r;
    if (b >= 1 && b + 2 < n) {
      const auto u = static_cast<std::size_t>(b);
      r = w0 * f[u - 1] + w1 * f[u] + w2 * f[u + 1] + w3 * f[u + 2];
    } else {
      r = w0 * at(b - 1) + w1 * at(b) + w2 * at(b + 1) + w3 * at(b + 2);
    }
    out[static_cast<std::size_t>(i)] = r;
  }
}

inline void require_shift_window(double X, double L) {
  if (!(std::abs(X) <= 0.25 * L)) {
    std::ostringstream os;
    os << "shift " << X << " outside the window |X| <= L/4 = " << 0.25 * L;
    throw domain_error("shift_window", os.str());
  }
}

/// U(xi + X), padded with the far-field constants.
inline FieldState shifted_field(const FieldState& s, double X, const EndStates& es) {
  require_shift_window(X, s.grid.half_length());
  FieldState out = s;
  if (X == 0.0) return out;
  shift_values(s.v, X, s.grid.dx(), es.v_minus, es.v_plus, out.v);
  shift_values(s.h, X, s.grid.dx(), es.h_minus(), es.h_plus(), out.h);
  return out;
}

struct FunctionalReport {
  double Y = 0, Y_g = 0, Y_b = 0, Y_l = 0, Y_s = 0;
  double J_bad = 0, J_para = 0, J_good = 0;
  double B1_plus = 0, B1_minus = 0, B2 = 0, B3 = 0, B4 = 0, B5 = 0;
  double Gh_plus = 0, Gh_minus = 0, Gv = 0, D = 0;
  double wre = 0;
  double I_gY = 0, I1 = 0, I2 = 0;
  double delta3 = 0;
  // Extras used by the estimate ledger.
  double Gv_bar = 0;    // G_v on the truncated state
  double a_phi = 0;     // int a' Phi(v/v~)
  double a_h2 = 0;      // int a' (h - h~)^2
  // Unweighted quantities of the vanishing-viscosity estimate.
  double eta_plain = 0;  // int eta(U|U~)
  double dv_phi = 0;     // int |v~'| Phi(v/v~)
  double D_plain = 0;    // nu int v^beta |d(p(v) - p(v~))|^2

  double B_delta() const { return B1_plus + B1_minus + B2; }
  double G_delta() const { return Gh_plus + Gh_minus + Gv + D; }
};

enum class TruncationKind { two_sided, lower_only, upper_only };

struct TruncationMode {
  TruncationKind kind = TruncationKind::two_sided;
  double k = 0.1;

  double psi(double y) const {
    switch (kind) {
      case TruncationKind::two_sided: return std::min(k, std::max(-k, y));
      case TruncationKind::lower_only: return std::max(-k, y);
      case TruncationKind::upper_only: return std::min(k, y);
    }
    return y;
  }
};

/// v-bar with p(v-bar) - p(v~) = psi(p(v) - p(v~)).
inline Vec truncate(const Vec& v, const Vec& v_tilde, const TruncationMode& mode) {
  if (!(mode.k > 0.0)) throw domain_error("truncation_level", "truncation level k must be positive");
  require_same_size(v.size(), v_tilde.size(), "truncate");
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    require_positive_volume(v[i], "truncate");
    const double pt = 1.0 / v_tilde[i];
    const double dp = 1.0 / v[i] - pt;
    const double c = mode.psi(dp);
    if (c == dp) {
      out[i] = v[i];
      continue;
    }
    const double pb = pt + c;
    if (!(pb > 0.0)) throw numerical_error("truncation", "truncated pressure is not positive");
    out[i] = 1.0 / pb;
  }
  return out;
}

inline Vec truncate(const Vec& v, const ShockProfile& P, const TruncationMode& mode) {
  return truncate(v, P.v_tilde, mode);
}

namespace detail {

// Profile derived quantities shared by every evaluation.
struct ProfileTerms {
  Vec dp_tilde;   // d/dxi p(v~)
  Vec dh_tilde;   // d/dxi h~
  Vec vb_tilde;   // v~^beta
};

inline ProfileTerms profile_terms(const ShockProfile& P) {
  ProfileTerms T;
  const std::size_t n = P.size();
  T.dp_tilde.resize(n);
  T.dh_tilde.resize(n);
  T.vb_tilde.resize(n);
  const double beta = P.model.beta();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = P.v_tilde[i];
    T.dp_tilde[i] = -P.dv_tilde[i] / (v * v);
    T.dh_tilde[i] = T.dp_tilde[i] / P.end_states.sigma;
    T.vb_tilde[i] = std::pow(v, beta);
  }
  return T;
}

inline double powb(double v, double beta) {
  if (beta == 1.0) return v;
  if (beta == 0.0) return 1.0;
  return std::pow(v, beta);
}

}  // namespace detail

/// Evaluates the functionals on states already aligned with the profile grid.
class FunctionalEvaluator {
 public:
  FunctionalEvaluator(const ShockProfile& P, const Weight& W, double delta3)
      : P_(&P), W_(W), delta3_(delta3), T_(detail::profile_terms(P)) {
    if (!(delta3 > 0.0)) throw domain_error("delta3_range", "truncation threshold delta3 must be positive");
    require_same_size(W.a.size(), P.size(), "FunctionalEvaluator");
  }

  const ShockProfile& profile() const noexcept { return *P_; }
  const Weight& weight() const noexcept { return W_; }
  double delta3() const noexcept { return delta3_; }

  struct ShiftTerms {
    double Y = 0, J_bad = 0, J_para = 0;
  };

  /// Only the three functionals that drive the shift ODE.
  ShiftTerms shift_terms(const Vec& v, const Vec& h) const {
    check(v, h);
    const std::size_t n = v.size();
    const auto& es = P_->end_states;
    const double sigma = es.sigma, beta = P_->model.beta(), nu = P_->nu;
    const double dx = P_->dx();
    dp_.resize(n);
    for (std::size_t i = 0; i < n; ++i) dp_[i] = 1.0 / v[i] - 1.0 / P_->v_tilde[i];
    const Vec ddp = derivative(dp_, dx);
    fy_.resize(n);
    fb_.resize(n);
    fp_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double vt = P_->v_tilde[i], a = W_.a[i], ap = W_.a_prime[i];
      const double dh = h[i] - P_->h_tilde[i];
      const double dpt = T_.dp_tilde[i];
      fy_[i] = -ap * (phi(v[i] / vt) + 0.5 * dh * dh) + a * (-dpt * (v[i] - vt) + T_.dh_tilde[i] * dh);
      fb_[i] = ap * dp_[i] * dh + sigma * a * P_->dv_tilde[i] * v[i] * dp_[i] * dp_[i];
      const double vb = detail::powb(v[i], beta);
      const double dvb = vb - T_.vb_tilde[i];
      fp_[i] = -nu * (ap * vb * dp_[i] * ddp[i] + ap * dp_[i] * dvb * dpt + a * ddp[i] * dvb * dpt);
    }
    return {trapezoid(fy_, dx), trapezoid(fb_, dx), trapezoid(fp_, dx)};
  }

  /// Full report for a state U^X aligned with the profile grid.
  FunctionalReport decompose(const Vec& v, const Vec& h) const {
    check(v, h);
    const std::size_t n = v.size();
    const auto& es = P_->end_states;
    const double sigma = es.sigma, beta = P_->model.beta(), nu = P_->nu;
    const double dx = P_->dx();
    const double d3 = delta3_;

    Vec dp(n), vbar(n);
    for (std::size_t i = 0; i < n; ++i) dp[i] = 1.0 / v[i] - 1.0 / P_->v_tilde[i];
    const Vec ddp = derivative(dp, dx);
    const TruncationMode two{TruncationKind::two_sided, d3};
    vbar = truncate(v, P_->v_tilde, two);

    enum Term {
      tY, tYg, tYb, tYl, tYs, tJb, tB3, tB4, tB5, tB1p, tB1m, tB2, tGhp, tGhm, tGv, tD,
      tWre, tIgY, tI1, tI2, tGvb, tAphi, tAh2, tEta, tDvPhi, tDPlain, tCount
    };
    std::vector<Vec> f(tCount, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      const double vt = P_->v_tilde[i], a = W_.a[i], ap = W_.a_prime[i];
      const double dv = v[i] - vt;
      const double dh = h[i] - P_->h_tilde[i];
      const double dpt = T_.dp_tilde[i], dht = T_.dh_tilde[i];
      const double ph = phi(v[i] / vt);
      const double relp = v[i] * dp[i] * dp[i];
      const double vb = detail::powb(v[i], beta);
      const double dvb = vb - T_.vb_tilde[i];
      const bool in = dp[i] <= d3;
      const double q = dh - dp[i] / sigma;

      f[tY][i] = -ap * (ph + 0.5 * dh * dh) + a * (-dpt * dv + dht * dh);
      f[tJb][i] = ap * dp[i] * dh + sigma * a * P_->dv_tilde[i] * relp;
      f[tB3][i] = -nu * ap * vb * dp[i] * ddp[i];
      f[tB4][i] = -nu * ap * dp[i] * dvb * dpt;
      f[tB5][i] = -nu * a * ddp[i] * dvb * dpt;
      f[tB2][i] = sigma * a * P_->dv_tilde[i] * relp;
      f[tGv][i] = sigma * ap * ph;
      f[tD][i] = nu * a * vb * ddp[i] * ddp[i];
      f[tWre][i] = a * (ph + 0.5 * dh * dh);
      f[tAphi][i] = ap * ph;
      f[tAh2][i] = ap * dh * dh;
      f[tEta][i] = ph + 0.5 * dh * dh;
      f[tDvPhi][i] = std::abs(P_->dv_tilde[i]) * ph;
      f[tDPlain][i] = nu * vb * ddp[i] * ddp[i];
      if (in) {
        f[tYg][i] = -ap * dp[i] * dp[i] / (2.0 * sigma * sigma) - ap * ph - a * dpt * dv + a * dht * dp[i] / sigma;
        f[tYb][i] = -0.5 * ap * q * q - ap * dp[i] * q / sigma;
        f[tYl][i] = a * dht * q;
        f[tB1p][i] = ap * dp[i] * dp[i] / (2.0 * sigma);
        f[tGhp][i] = 0.5 * sigma * ap * q * q;
      } else {
        f[tYs][i] = -ap * ph - a * dpt * dv - 0.5 * ap * dh * dh + a * dht * dh;
        f[tB1m][i] = ap * dp[i] * dh;
        f[tGhm][i] = 0.5 * sigma * ap * dh * dh;
      }
      const double vbb = vbar[i];
      const double dpb = 1.0 / vbb - 1.0 / vt;
      const double phb = phi(vbb / vt);
      f[tIgY][i] = -ap * dpb * dpb / (2.0 * sigma * sigma) - ap * phb - a * dpt * (vbb - vt) + a * dht * dpb / sigma;
      f[tI1][i] = ap * dpb * dpb / (2.0 * sigma);
      f[tI2][i] = sigma * a * P_->dv_tilde[i] * vbb * dpb * dpb;
      f[tGvb][i] = sigma * ap * phb;
    }
    auto I = [&](Term t) { return trapezoid(f[t], dx); };
    FunctionalReport r;
    r.delta3 = d3;
    r.Y = I(tY);
    r.Y_g = I(tYg);
    r.Y_b = I(tYb);
    r.Y_l = I(tYl);
    r.Y_s = I(tYs);
    r.J_bad = I(tJb);
    r.B3 = I(tB3);
    r.B4 = I(tB4);
    r.B5 = I(tB5);
    r.J_para = r.B3 + r.B4 + r.B5;
    r.B1_plus = I(tB1p);
    r.B1_minus = I(tB1m);
    r.B2 = I(tB2);
    r.Gh_plus = I(tGhp);
    r.Gh_minus = I(tGhm);
    r.Gv = I(tGv);
    r.D = I(tD);
    r.wre = I(tWre);
    r.a_phi = I(tAphi);
    r.a_h2 = I(tAh2);
    r.eta_plain = I(tEta);
    r.dv_phi = I(tDvPhi);
    r.D_plain = I(tDPlain);
    r.J_good = sigma * r.a_phi + 0.5 * sigma * r.a_h2 + r.D;
    r.I_gY = I(tIgY);
    r.I1 = I(tI1);
    r.I2 = I(tI2);
    r.Gv_bar = I(tGvb);
    return r;
  }

  FunctionalReport decompose(const FieldState& s) const { return decompose(s.v, s.h); }

 private:
  void check(const Vec& v, const Vec& h) const {
    require_same_size(v.size(), P_->size(), "functionals");
    require_same_size(h.size(), P_->size(), "functionals");
  }

  const ShockProfile* P_;
  Weight W_;
  double delta3_;
  detail::ProfileTerms T_;
  mutable Vec dp_, fy_, fb_, fp_;
};

inline FunctionalReport decompose(const FieldState& shifted, const ShockProfile& P, const Weight& W, double delta3) {
  if (!(shifted.grid == P.grid)) throw domain_error("shape", "state and profile grids differ");
  return FunctionalEvaluator(P, W, delta3).decompose(shifted);
}

/// Absolute scale for the exact identities: the sum of the magnitudes of all
/// terms involved.
inline double identity_scale(const FunctionalReport& r) {
  return std::abs(r.J_bad) + std::abs(r.J_good) + std::abs(r.B1_plus) + std::abs(r.B1_minus) + std::abs(r.B2) +
         std::abs(r.Gh_plus) + std::abs(r.Gh_minus) + std::abs(r.Gv) + std::abs(r.D);
}

/// |J_bad - J_good - (B_delta - G_delta)|.
inline double max_split_residual(const FunctionalReport& r) {
  return std::abs((r.J_bad - r.J_good) - (r.B_delta() - r.G_delta()));
}

inline double y_additivity_residual(const FunctionalReport& r) {
  return std::abs(r.Y - (r.Y_g + r.Y_b + r.Y_l + r.Y_s));
}

inline double y_scale(const FunctionalReport& r) {
  return std::abs(r.Y) + std::abs(r.Y_g) + std::abs(r.Y_b) + std::abs(r.Y_l) + std::abs(r.Y_s);
}

/// The combination R(U) bounded above by zero in the main proposition, for
/// states with |Y| <= eps^2.  `scale` is the sum of the magnitudes of its terms.
struct MainCombination {
  double value = 0.0;
  double scale = 0.0;
  bool applicable = false;
};

inline MainCombination main_combination(const FunctionalReport& r, double eps, double lambda, double delta0) {
  MainCombination m;
  m.applicable = std::abs(r.Y) <= eps * eps;
  const double el = eps / lambda;
  const double B = r.B_delta();
  const double terms[] = {
      -r.Y * r.Y / std::pow(eps, 4),
      B,
      delta0 * el * std::abs(B),
      delta0 * el * r.B1_plus,
      r.J_para,
      delta0 * std::abs(r.J_para),
      -r.Gh_minus,
      -0.5 * r.Gh_plus,
      -(1.0 - delta0 * el) * r.Gv,
      -(1.0 - delta0) * r.D,
  };
  for (double t : terms) {
    m.value += t;
    m.scale += std::abs(t);
  }
  return m;
}

struct NormalizedVars {
  Vec y_nodes;   // y at each profile node
  Vec y, w, W;   // uniform y-grid and the resampled w, W
};

/// y = (p_- - p(v~))/eps, w = (p(v) - p(v~)) as a function of y, W = (lambda/eps) w,
/// resampled on a uniform grid of `m` points in [0, 1].
inline NormalizedVars normalized_vars(const Vec& v, const ShockProfile& P, double lambda, std::size_t m = 513) {
  require_same_size(v.size(), P.size(), "normalized_vars");
  if (!(lambda > 0.0)) throw domain_error("lambda_range", "lambda must be positive");
  if (m < 3) throw domain_error("shape", "normalized grid needs at least 3 points");
  const auto& es = P.end_states;
  NormalizedVars out;
  out.y_nodes.resize(P.size());
  Vec ys, ws;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double y = (es.p_minus() - 1.0 / P.v_tilde[i]) / es.eps;
    out.y_nodes[i] = y;
    if (i > 0 && y < out.y_nodes[i - 1]) throw domain_error("invalid_profile", "p(v~) is not monotone");
    const double wi = 1.0 / v[i] - 1.0 / P.v_tilde[i];
    if (!ys.empty() && y <= ys.back()) continue;
    ys.push_back(y);
    ws.push_back(wi);
  }
  out.y.resize(m);
  out.w.resize(m);
  out.W.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double y = static_cast<double>(k) / static_cast<double>(m - 1);
    out.y[k] = y;
    out.w[k] = interp_linear(ys, ws, y);
    out.W[k] = lambda / es.eps * out.w[k];
  }
  return out;
}

struct JacobianReport {
  double max_deviation = 0.0;          // max |v~^beta/(y(1-y)) y' - (eps/sigma) v~|
  double max_deviation_over_eps2 = 0.0;
  double normalized = 0.0;             // max |v~^beta/(y(1-y)) y' - eps/sigma_*^2| / eps^2
  double at_zero_lhs = 0.0;            // left side interpolated at xi = 0
  double at_zero_rhs = 0.0;
  std::size_t samples = 0;
};

/// Checks v~^beta/(y(1-y)) dy/dxi = (eps/sigma) v~ with centred differences of y,
/// restricted to y in [band, 1 - band].
inline JacobianReport jacobian_check(const ShockProfile& P, double band = 1e-6) {
  const auto& es = P.end_states;
  const std::size_t n = P.size();
  const double dx = P.dx();
  const double beta = P.model.beta();
  Vec y(n), ym(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pt = 1.0 / P.v_tilde[i];
    y[i] = (es.p_minus() - pt) / es.eps;
    ym[i] = (pt - es.p_plus()) / es.eps;  // 1 - y without cancellation
  }
  JacobianReport R;
  const double sstar = es.sigma_star();
  Vec lhs(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dy = (y[i + 1] - y[i - 1]) / (2.0 * dx);
    const double vt = P.v_tilde[i];
    lhs[i] = std::pow(vt, beta) * dy * (1.0 / y[i] + 1.0 / ym[i]);
    rhs[i] = es.eps / es.sigma * vt;
    if (!(y[i] >= band && ym[i] >= band)) continue;
    ++R.samples;
    R.max_deviation = std::max(R.max_deviation, std::abs(lhs[i] - rhs[i]));
    R.normalized = std::max(R.normalized, std::abs(lhs[i] - es.eps / (sstar * sstar)) / (es.eps * es.eps));
  }
  R.max_deviation_over_eps2 = R.max_deviation / (es.eps * es.eps);
  const double s0 = P.grid.half_length() / dx;
  R.at_zero_lhs = lagrange4(lhs, s0, 0.0, 0.0);
  R.at_zero_rhs = lagrange4(rhs, s0, 0.0, 0.0);
  return R;
}

// ---------------------------------------------------------------------------
// Estimate ledger

struct LedgerRow {
  std::string id;
  double ratio = 0.0;        // sup LHS/RHS over applicable samples; NaN if none
  std::size_t samples = 0;   // samples with |Y| <= eps^2 and a nonzero side
  std::size_t zero_rhs = 0;  // samples with RHS = 0 < LHS (ratio infinite)
};

struct LedgerInputs {
  double eps = 0.0, lambda = 0.0, delta3 = 0.0;
};

struct LedgerSample {
  double lhs = 0.0, rhs = 0.0;
};

/// LHS and RHS (with every unquantified constant set to one) of each
/// estimate family for one report.
inline std::vector<std::pair<std::string, LedgerSample>> ledger_terms(const FunctionalReport& r,
                                                                      const LedgerInputs& in) {
  const double e = in.eps, l = in.lambda;
  const double el = e / l;
  const double D = r.D, Gv = r.Gv;
  const double Yconc_lhs = std::pow(r.Y_g - r.I_gY, 2) + r.Y_b * r.Y_b + r.Y_l * r.Y_l + r.Y_s * r.Y_s;
  const double Yconc_rhs =
      e * e / l * (el * D + std::sqrt(el) * Gv + (Gv - r.Gv_bar) + r.Gh_minus + std::sqrt(1.0 / el) * r.Gh_plus);
  return {
      {"locE", {r.a_phi + r.a_h2, e * e / l}},
      {"bo1p", {std::abs(r.B1_plus - r.I1), el * D + std::pow(e, 6) / std::pow(l, 4) * Gv}},
      {"bo1m", {std::abs(r.B1_minus), in.delta3 * r.Gh_minus + std::pow(el, 0.75) * D + std::pow(e, 6) / std::pow(l, 4) * Gv}},
      {"bo2", {std::abs(r.B2 - r.I2), el * el * D + std::pow(e, 7) / std::pow(l, 5) * Gv + el * (Gv - r.Gv_bar)}},
      {"bo", {std::abs(r.B_delta()) + std::abs(r.B1_plus), e * e / l + std::pow(el, 0.75) * D}},
      {"para-B3", {std::abs(r.B3), l * D + e * Gv}},
      {"para-B4", {std::abs(r.B4), e * e * e / l * D + e * e * Gv}},
      {"para-B5", {std::abs(r.B5), el * D + e * e * Gv}},
      {"para-total", {std::abs(r.J_para), (l + el) * D + e * Gv}},
      {"para-tot", {std::abs(r.J_para), e * e / l + (l + el) * D}},
      {"Y-conc", {Yconc_lhs, Yconc_rhs}},
  };
}

/// Empirical constants sup LHS/RHS over the reports with |Y| <= eps^2 and
/// U != U~.
inline std::vector<LedgerRow> estimate_ledger(const std::vector<FunctionalReport>& reports, const LedgerInputs& in) {
  std::vector<LedgerRow> rows;
  for (const auto& [id, s] : ledger_terms(FunctionalReport{}, in)) {
    LedgerRow row;
    row.id = id;
    row.ratio = std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  for (const auto& r : reports) {
    if (!(std::abs(r.Y) <= in.eps * in.eps)) continue;
    // U = U~: every left side vanishes identically.
    if (r.wre == 0.0 && r.D == 0.0) continue;
    const auto terms = ledger_terms(r, in);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const auto& s = terms[k].second;
      auto& row = rows[k];
      if (s.lhs == 0.0 && s.rhs == 0.0) continue;
      ++row.samples;
      if (s.rhs <= 0.0) {
        ++row.zero_rhs;
        row.ratio = std::numeric_limits<double>::infinity();
        continue;
      }
      const double q = s.lhs / s.rhs;
      if (std::isnan(row.ratio) || q > row.ratio) row.ratio = q;
    }
  }
  return rows;
}

}  // namespace shocklab
