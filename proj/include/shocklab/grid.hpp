#pragma once

// Uniform grids, quadrature, finite differences and interpolation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "shocklab/error.hpp"

namespace shocklab {

using Vec = std::vector<double>;

/// Uniform node-centred grid x_i = -L + i*dx on [-L, L], i = 0..n-1.
class Grid {
 public:
  Grid() = default;
  Grid(double half_length, std::size_t n) : L_(half_length), n_(n) {
    if (n < 2) throw domain_error("grid_size", "grid needs at least two nodes");
    if (!(half_length > 0.0)) throw domain_error("grid_length", "grid half-length must be positive");
    dx_ = 2.0 * L_ / static_cast<double>(n - 1);
  }

  std::size_t size() const noexcept { return n_; }
  double half_length() const noexcept { return L_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t i) const noexcept { return -L_ + static_cast<double>(i) * dx_; }
  double left() const noexcept { return -L_; }
  double right() const noexcept { return L_; }

  Vec nodes() const {
    Vec out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = x(i);
    return out;
  }

  bool operator==(const Grid& o) const noexcept { return n_ == o.n_ && L_ == o.L_; }

 private:
  double L_ = 1.0;
  std::size_t n_ = 2;
  double dx_ = 2.0;
};

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": size mismatch (" << a << " vs " << b << ")";
    throw domain_error("shape", os.str());
  }
}

/// Composite trapezoid rule with uniform spacing.
inline double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

/// Second-order derivative: centred in the interior, one-sided at the ends.
inline Vec derivative(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  Vec d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (f[1] - f[0]) / dx;
    return d;
  }
  const double inv2 = 0.5 / dx;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv2;
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
  return d;
}

inline double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Four-point Lagrange interpolation of uniformly sampled data at position
/// s measured in grid units (s = 0 is the first node).  Samples outside
/// the array take the supplied end values.
inline double lagrange4(std::span<const double> f, double s, double left_value, double right_value) {
  const auto n = static_cast<long>(f.size());
  auto at = [&](long j) {
    if (j < 0) return left_value;
    if (j >= n) return right_value;
    return f[static_cast<std::size_t>(j)];
  };
  const double fl = std::floor(s);
  const long j = static_cast<long>(fl);
  const double t = s - fl;
  if (t == 0.0) return at(j);
  const double fm1 = at(j - 1), f0 = at(j), f1 = at(j + 1), f2 = at(j + 2);
  const double wm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double w0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double w1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double w2 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return wm1 * fm1 + w0 * f0 + w1 * f1 + w2 * f2;
}

/// Piecewise-linear interpolation on a strictly increasing abscissa.
inline double interp_linear(std::span<const double> x, std::span<const double> y, double q) {
  require_same_size(x.size(), y.size(), "interp_linear");
  if (x.empty()) throw domain_error("shape", "interp_linear: empty table");
  if (q <= x.front()) return y.front();
  if (q >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), q);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  const double t = (q - x[k - 1]) / (x[k] - x[k - 1]);
  return y[k - 1] + t * (y[k] - y[k - 1]);
}

}  // namespace shocklab
