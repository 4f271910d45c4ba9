#pragma once

// Standalone checks of the analytic kernel: the nonlinear Poincare functional
// R_delta with a randomized search, and the global and local inequalities on
// Phi and the relative pressure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "shocklab/error.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/model.hpp"

namespace shocklab {

// ---------------------------------------------------------------------------
// Reproducible random numbers

/// Uniform and normal variates derived only from the raw mt19937_64 stream,
/// so a seed gives the same numbers on every standard library.
class LabRng {
 public:
  explicit LabRng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    eng_.seed(seq);
  }
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }
  // Uniform, but each endpoint is drawn with probability 1/8 so that
  // infima attained on the boundary are sampled exactly.
  double edge_uniform(double lo, double hi) {
    const double u = uniform();
    if (u < 0.125) return lo;
    if (u < 0.25) return hi;
    return uniform(lo, hi);
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Nonlinear Poincare functional

struct PoincareSample {
  Vec W;  // values on the uniform grid y_i = i/(M-1)
  double delta = 0.01;
  double C1 = 4.0;
};

namespace detail {

inline double ydx(std::size_t m) { return 1.0 / static_cast<double>(m - 1); }

// Centred differences, one-sided at the ends.
inline Vec poincare_dy(const Vec& W) { return derivative(W, ydx(W.size())); }

}  // namespace detail

struct PoincareParts {
  double W2 = 0, W1 = 0, W3 = 0, absW3 = 0, dirichlet = 0;
};

inline PoincareParts poincare_parts(const Vec& W) {
  if (W.size() < 3) throw domain_error("shape", "Poincare grid needs at least 3 points");
  const std::size_t m = W.size();
  const double h = detail::ydx(m);
  const Vec d = detail::poincare_dy(W);
  Vec f2(m), f3(m), fa(m), fd(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double y = static_cast<double>(i) * h;
    f2[i] = W[i] * W[i];
    f3[i] = f2[i] * W[i];
    fa[i] = std::abs(f3[i]);
    fd[i] = y * (1.0 - y) * d[i] * d[i];
  }
  PoincareParts p;
  p.W2 = trapezoid(f2, h);
  p.W1 = trapezoid(W, h);
  p.W3 = trapezoid(f3, h);
  p.absW3 = trapezoid(fa, h);
  p.dirichlet = trapezoid(fd, h);
  return p;
}

inline double poincare_R(const Vec& W, double delta) {
  if (!(delta > 0.0)) throw domain_error("delta_range", "delta must be positive");
  const PoincareParts p = poincare_parts(W);
  const double m = p.W2 + 2.0 * p.W1;
  return -m * m / delta + (1.0 + delta) * p.W2 + 2.0 / 3.0 * p.W3 + delta * p.absW3 - (1.0 - delta) * p.dirichlet;
}

inline double poincare_R(const PoincareSample& s) {
  if (!(s.C1 > 0.0)) throw domain_error("C1_range", "C1 must be positive");
  return poincare_R(s.W, s.delta);
}

/// Gradient of the discrete R_delta with respect to the nodal values.
inline Vec poincare_gradient(const Vec& W, double delta) {
  const std::size_t m = W.size();
  const double h = detail::ydx(m);
  const PoincareParts p = poincare_parts(W);
  const double mean_term = p.W2 + 2.0 * p.W1;
  const Vec d = detail::poincare_dy(W);
  Vec g(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double w = (i == 0 || i + 1 == m) ? 0.5 * h : h;
    g[i] = -2.0 / delta * mean_term * (2.0 * w * W[i] + 2.0 * w) + (1.0 + delta) * 2.0 * w * W[i] +
           2.0 * w * W[i] * W[i] + 3.0 * delta * w * std::abs(W[i]) * W[i];
  }
  // Dirichlet part; its end weights vanish, so only interior stencils matter.
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double y = static_cast<double>(i) * h;
    const double c = -(1.0 - delta) * h * y * (1.0 - y) * 2.0 * d[i] / (2.0 * h);
    g[i + 1] += c;
    g[i - 1] -= c;
  }
  return g;
}

struct PoincareSearchOptions {
  std::size_t grid = 513;
  int max_modes = 16;
  std::size_t refine_best = 8;
  int ascent_steps = 200;
};

struct PoincareSearchResult {
  double max_R = -std::numeric_limits<double>::infinity();
  double max_R_sampling = -std::numeric_limits<double>::infinity();  // before ascent
  Vec argmax_W;
  Vec y;
  std::size_t samples = 0;
};

namespace detail {

// Basis 1, sqrt2 cos(k pi y), sqrt2 sin(k pi y) for k = 1..K.
inline std::vector<Vec> fourier_basis(std::size_t m, int K) {
  std::vector<Vec> B;
  const double h = ydx(m);
  B.emplace_back(m, 1.0);
  for (int k = 1; k <= K; ++k) {
    Vec c(m), s(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double a = k * std::numbers::pi * static_cast<double>(i) * h;
      c[i] = std::sqrt(2.0) * std::cos(a);
      s[i] = std::sqrt(2.0) * std::sin(a);
    }
    B.push_back(std::move(c));
    B.push_back(std::move(s));
  }
  return B;
}

inline Vec synthesize(const std::vector<Vec>& B, const Vec& c) {
  Vec W(B[0].size(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0.0) continue;
    for (std::size_t i = 0; i < W.size(); ++i) W[i] += c[k] * B[k][i];
  }
  return W;
}

// Scales the coefficients so that the discrete int W^2 is at most C1.
inline void project_ball(const std::vector<Vec>& B, Vec& c, double C1) {
  const Vec W = synthesize(B, c);
  Vec f(W.size());
  for (std::size_t i = 0; i < W.size(); ++i) f[i] = W[i] * W[i];
  const double n2 = trapezoid(f, ydx(W.size()));
  if (n2 > C1) {
    const double s = std::sqrt(C1 / n2);
    for (double& x : c) x *= s;
  }
}

}  // namespace detail

/// Random truncated Fourier series in the L2 ball, then projected gradient
/// ascent in coefficient space from the best candidates.
inline PoincareSearchResult poincare_search(double delta, double C1, std::size_t n_samples, std::uint64_t seed,
                                            const PoincareSearchOptions& opt = {}) {
  if (!(delta > 0.0)) throw domain_error("delta_range", "delta must be positive");
  if (!(C1 > 0.0)) throw domain_error("C1_range", "C1 must be positive");
  const std::size_t m = opt.grid;
  const auto B = detail::fourier_basis(m, opt.max_modes);
  const std::size_t nb = B.size();
  LabRng rng(seed);
  PoincareSearchResult res;
  res.samples = n_samples;
  res.y.resize(m);
  for (std::size_t i = 0; i < m; ++i) res.y[i] = static_cast<double>(i) * detail::ydx(m);

  std::vector<std::pair<double, Vec>> best;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const int K = rng.integer(0, opt.max_modes);
    Vec c(nb, 0.0);
    c[0] = rng.normal();
    for (int k = 1; k <= K; ++k) {
      c[2 * k - 1] = rng.normal() / k;
      c[2 * k] = rng.normal() / k;
    }
    const Vec W0 = detail::synthesize(B, c);
    Vec f(m);
    for (std::size_t i = 0; i < m; ++i) f[i] = W0[i] * W0[i];
    const double n2 = trapezoid(f, detail::ydx(m));
    if (n2 > 0.0) {
      // Radius uniform in the ball.
      const double r = std::sqrt(C1) * rng.uniform();
      const double sc = r / std::sqrt(n2);
      for (double& x : c) x *= sc;
    }
    const double R = poincare_R(detail::synthesize(B, c), delta);
    if (R > res.max_R_sampling) res.max_R_sampling = R;
    best.emplace_back(R, c);
    if (best.size() > 4 * opt.refine_best) {
      std::partial_sort(best.begin(), best.begin() + opt.refine_best, best.end(),
                        [](const auto& a, const auto& b) { return a.first > b.first; });
      best.resize(opt.refine_best);
    }
  }
  std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (best.size() > opt.refine_best) best.resize(opt.refine_best);

  for (auto& [R0, c] : best) {
    double R = R0;
    double step = 1e-2;
    for (int it = 0; it < opt.ascent_steps && step > 1e-14; ++it) {
      const Vec W = detail::synthesize(B, c);
      const Vec gW = poincare_gradient(W, delta);
      Vec gc(nb, 0.0);
      for (std::size_t k = 0; k < nb; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += B[k][i] * gW[i];
        gc[k] = s;
      }
      bool improved = false;
      while (step > 1e-14) {
        Vec trial = c;
        for (std::size_t k = 0; k < nb; ++k) trial[k] += step * gc[k];
        detail::project_ball(B, trial, C1);
        const double Rt = poincare_R(detail::synthesize(B, trial), delta);
        if (Rt > R) {
          c = std::move(trial);
          R = Rt;
          step *= 2.0;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (R > res.max_R) {
      res.max_R = R;
      res.argmax_W = detail::synthesize(B, c);
    }
  }
  if (best.empty()) res.max_R = res.max_R_sampling;
  return res;
}

/// Largest delta in [lo, hi] whose search maximum stays below `tol`, by
/// bisection.  Reported, not asserted.
inline double poincare_delta_max(double C1, std::size_t n_samples, std::uint64_t seed, double lo = 1e-3,
                                 double hi = 0.5, int iters = 12, double tol = 1e-9,
                                 const PoincareSearchOptions& opt = {}) {
  if (poincare_search(hi, C1, n_samples, seed, opt).max_R <= tol) return hi;
  if (poincare_search(lo, C1, n_samples, seed, opt).max_R > tol) return 0.0;
  for (int k = 0; k < iters; ++k) {
    const double mid = 0.5 * (lo + hi);
    (poincare_search(mid, C1, n_samples, seed, opt).max_R <= tol ? lo : hi) = mid;
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Global Phi inequalities

struct PhiBoundsReport {
  double c1_low = std::numeric_limits<double>::infinity();   // inf Phi/|v-w|^2 on the inner band
  double c1_high = 0.0;                                      // sup Phi/|v-w|^2 on the inner band
  double c1 = 0.0;                                           // min(c1_low, 1/c1_high)
  double c2 = std::numeric_limits<double>::infinity();       // inf Phi/|v-w| outside
  double c3 = std::numeric_limits<double>::infinity();       // inf (Phi(v/w)-Phi(u/w))/|v-u|
  double c3_delta_star = 0.0;
  std::size_t sim_samples = 0;
  std::size_t sim_violations = 0;
  double sim_worst = 0.0;  // largest relative violation of Phi(v/w) >= Phi(u/w)
};

/// Samples (v, w) with w in [v-/2, 2 v-] and fits the constants of the global
/// bounds; checks the ordering property on random ordered triples.
inline PhiBoundsReport check_phi_bounds(double v_minus, std::size_t n_samples, std::uint64_t seed,
                                        double delta_star_fraction = 0.1) {
  require_positive_volume(v_minus, "check_phi_bounds");
  PhiBoundsReport r;
  LabRng rng(seed, 1);
  const double lo = v_minus / 3.0, hi = 3.0 * v_minus;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double w = rng.edge_uniform(0.5 * v_minus, 2.0 * v_minus);
    const double v = rng.edge_uniform(lo, hi);
    const double d = std::abs(v - w);
    if (d > 0.0) {
      const double q = phi(v / w) / (d * d);
      r.c1_low = std::min(r.c1_low, q);
      r.c1_high = std::max(r.c1_high, q);
    }
    // Outside the band: half the samples below, half above.
    const double vo = rng.uniform() < 0.25 ? (s % 2 ? lo : hi)
                     : s % 2           ? rng.log_uniform(1e-3 * v_minus, lo)
                                       : rng.log_uniform(hi, 1e3 * v_minus);
    r.c2 = std::min(r.c2, phi(vo / w) / std::abs(vo - w));
  }
  r.c1 = std::min(r.c1_low, 1.0 / r.c1_high);

  // Ordering on triples w <= u <= v or v <= u <= w.
  LabRng tr(seed, 2);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double w = tr.log_uniform(1e-2 * v_minus, 1e2 * v_minus);
    double a = tr.log_uniform(1e-2 * v_minus, 1e2 * v_minus);
    double b = tr.log_uniform(1e-2 * v_minus, 1e2 * v_minus);
    double u, v;
    if ((a >= w) == (b >= w)) {
      u = std::abs(a - w) <= std::abs(b - w) ? a : b;
      v = u == a ? b : a;
    } else {
      u = w + tr.uniform() * (a - w);
      v = a;
    }
    ++r.sim_samples;
    const double fv = phi(v / w), fu = phi(u / w);
    // Four ulps of slack for the two logarithm branches.
    if (fu - fv > 4.0 * std::numeric_limits<double>::epsilon() * fu) {
      ++r.sim_violations;
      r.sim_worst = std::max(r.sim_worst, (fu - fv) / fu);
    }
  }

  // Lower bound on the increment with u between w and v.
  LabRng lr(seed, 3);
  r.c3_delta_star = delta_star_fraction * v_minus;
  const double ds = r.c3_delta_star;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double w = lr.edge_uniform(0.5 * v_minus, 2.0 * v_minus);
    const double sgn = s % 2 ? 1.0 : -1.0;
    const double far_max = sgn > 0 ? 1e2 * v_minus - w : w - 1e-3 * v_minus;
    if (far_max <= ds) continue;
    const double dv = lr.edge_uniform(ds, std::min(far_max, 3.0 * v_minus));
    const double du = lr.edge_uniform(0.0, ds);
    const double v = w + sgn * dv, u = w + sgn * du;
    if (v == u) continue;
    r.c3 = std::min(r.c3, (phi(v / w) - phi(u / w)) / std::abs(v - u));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Local expansions

struct LocalExpansionRow {
  double delta = 0.0;
  std::size_t samples = 0;
  std::size_t est1_upper_violations = 0;      // Phi <= (z-1)^2/2
  std::size_t est1_upper_violations_v_ge_w = 0;
  std::size_t est1_lower_violations = 0;      // (z-1)^2/2 - (z-1)^3/3 <= Phi
  std::size_t corrected_upper_violations = 0; // Phi <= (z-1)^2 / (2 min(1, z))
  double est1_upper_worst = 0.0;              // max (Phi - (z-1)^2/2)
  double C_p_est1 = 0.0;                      // sup (p(v|w)/|dp|^2 - 1/p(w))/delta
  double C_v_quad = 0.0;                      // sup |v-w|^2/Phi
  double C_p_quad = 0.0;                      // sup |p(v)-p(w)|^2/Phi
};

struct LocalExpansionReport {
  std::vector<LocalExpansionRow> rows;
  // Largest delta of the grid with zero violations; 0 when none qualifies.
  double est1_upper_delta_max = 0.0;
  double est1_lower_delta_max = 0.0;
  double corrected_upper_delta_max = 0.0;
};

namespace detail {

// The pointwise comparisons used by the local report, with a relative slack
// of a few ulps on the quadratic scale.
inline bool est1_upper_violated(double z) {
  const double x = z - 1.0;
  return phi(z) > 0.5 * x * x * (1.0 + 1e-13);
}
inline bool est1_lower_violated(double z) {
  const double x = z - 1.0;
  const double lower = 0.5 * x * x - x * x * x / 3.0;
  return lower > phi(z) + 1e-13 * x * x;
}
inline bool corrected_upper_violated(double z) {
  const double x = z - 1.0;
  return phi(z) > 0.5 * x * x / std::min(1.0, z) * (1.0 + 1e-13);
}

}  // namespace detail

/// Dense local sampling for every delta of the grid: |1/w - 1/v-| <= delta
/// and |1/v - 1/w| <= delta.
inline LocalExpansionReport check_local_expansions(double v_minus, const std::vector<double>& delta_grid,
                                                   std::size_t samples_per_delta, std::uint64_t seed) {
  require_positive_volume(v_minus, "check_local_expansions");
  LocalExpansionReport rep;
  const double pm = 1.0 / v_minus;
  std::uint64_t stream = 10;
  for (double delta : delta_grid) {
    if (!(delta > 0.0 && delta < pm)) throw domain_error("delta_range", "delta must lie in (0, p(v_minus))");
    LabRng rng(seed, stream++);
    LocalExpansionRow row;
    row.delta = delta;
    for (std::size_t s = 0; s < samples_per_delta; ++s) {
      const double pw = pm + rng.uniform(-delta, delta);
      const double dp = rng.uniform(-delta, delta);
      const double pv = pw + dp;
      if (!(pv > 0.0) || dp == 0.0) continue;
      const double w = 1.0 / pw, v = 1.0 / pv;
      const double z = v / w;
      const double P = phi(z);
      ++row.samples;
      if (detail::est1_upper_violated(z)) {
        ++row.est1_upper_violations;
        if (v >= w) ++row.est1_upper_violations_v_ge_w;
        const double x = z - 1.0;
        row.est1_upper_worst = std::max(row.est1_upper_worst, P - 0.5 * x * x);
      }
      if (detail::est1_lower_violated(z)) ++row.est1_lower_violations;
      if (detail::corrected_upper_violated(z)) ++row.corrected_upper_violations;
      row.C_p_est1 = std::max(row.C_p_est1, (rel_pressure(v, w) / (dp * dp) - 1.0 / pw) / delta);
      if (P > 0.0) {
        row.C_v_quad = std::max(row.C_v_quad, (v - w) * (v - w) / P);
        row.C_p_quad = std::max(row.C_p_quad, dp * dp / P);
      }
    }
    if (row.est1_upper_violations == 0) rep.est1_upper_delta_max = std::max(rep.est1_upper_delta_max, delta);
    if (row.est1_lower_violations == 0) rep.est1_lower_delta_max = std::max(rep.est1_lower_delta_max, delta);
    if (row.corrected_upper_violations == 0) {
      rep.corrected_upper_delta_max = std::max(rep.corrected_upper_delta_max, delta);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace shocklab
