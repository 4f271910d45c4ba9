#pragma once

// Isothermal gas law, relative quantities, and Rankine-Hugoniot end states
// for the 1D Lagrangian Navier-Stokes / Euler system.

#include <cmath>
#include <sstream>
#include <utility>

#include "shocklab/error.hpp"

namespace shocklab {

/// Viscosity law mu(v) = v^{-alpha} with prefactor fixed to one.
class GasModel {
 public:
  GasModel() = default;
  explicit GasModel(double alpha) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw domain_error("alpha_range", "viscosity exponent alpha must lie in [0,1]");
    }
  }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return 1.0 - alpha_; }

 private:
  double alpha_ = 0.0;
};

inline void require_positive_volume(double v, const char* what) {
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << what << ": specific volume must be positive (got " << v << ")";
    throw domain_error("positivity", os.str());
  }
}

inline double pressure(double v) {
  require_positive_volume(v, "pressure");
  return 1.0 / v;
}

inline double pressure_deriv(double v) {
  require_positive_volume(v, "pressure_deriv");
  return -1.0 / (v * v);
}

/// Phi(z) = z - 1 - log z, the relative functional of -log.
inline double phi(double z) {
  if (!(z > 0.0)) throw domain_error("positivity", "phi: argument must be positive");
  const double x = z - 1.0;
  if (std::abs(x) >= 0.5) return x - std::log(z);
  // Near z = 1: log z = 2 atanh(t), t = x/(2+x), and x - 2t = x^2/(2+x), so
  // Phi = x^2/(2+x) - 2 sum_k t^(2k+1)/(2k+1) without cancellation.
  const double t = x / (2.0 + x);
  const double t2 = t * t;
  double term = t * t2, series = 0.0;
  for (int k = 3; k < 80 && std::abs(term) > 1e-18 * std::abs(series); k += 2) {
    series += term / k;
    term *= t2;
  }
  return x * x / (2.0 + x) - 2.0 * series;
}

/// p(v|w) = p(v) - p(w) - p'(w)(v - w).  For p = 1/v this is v (p(v)-p(w))^2.
inline double rel_pressure(double v, double w) {
  require_positive_volume(v, "rel_pressure");
  require_positive_volume(w, "rel_pressure");
  const double dp = 1.0 / v - 1.0 / w;
  return v * dp * dp;
}

enum class Family { one = 1, two = 2 };

struct EndStates {
  double v_minus = 1.0;
  double u_minus = 0.0;
  double v_plus = 1.0;
  double u_plus = 0.0;
  double sigma = 0.0;
  double eps = 0.0;
  Family family = Family::two;

  double p_minus() const { return 1.0 / v_minus; }
  double p_plus() const { return 1.0 / v_plus; }
  // Far-field effective velocities coincide with the velocities.
  double h_minus() const { return u_minus; }
  double h_plus() const { return u_plus; }
  // sigma_* = 1/v_-, the characteristic speed the shock speed tends to.
  double sigma_star() const { return 1.0 / v_minus; }
};

/// |mass jump| + |momentum jump| of the Rankine-Hugoniot system.
inline double rh_residual(const EndStates& s) {
  const double mass = -s.sigma * (s.v_plus - s.v_minus) - (s.u_plus - s.u_minus);
  const double mom = -s.sigma * (s.u_plus - s.u_minus) + 1.0 / s.v_plus - 1.0 / s.v_minus;
  return std::abs(mass) + std::abs(mom);
}

/// Lax admissibility together with the family tag.
inline bool lax_admissible(const EndStates& s) {
  if (s.family == Family::two) return s.v_minus < s.v_plus && s.u_minus > s.u_plus && s.sigma > 0.0;
  return s.v_minus > s.v_plus && s.u_minus > s.u_plus && s.sigma < 0.0;
}

namespace detail {

inline EndStates solve_two_shock(double v_minus, double u_minus, double eps) {
  EndStates s;
  s.v_minus = v_minus;
  s.u_minus = u_minus;
  s.eps = eps;
  s.family = Family::two;
  const double p_plus = 1.0 / v_minus - eps;
  s.v_plus = 1.0 / p_plus;
  const double jump = s.v_plus - v_minus;
  s.sigma = std::sqrt(eps / jump);
  s.u_plus = u_minus - s.sigma * jump;
  return s;
}

}  // namespace detail

/// Solve the jump conditions for a shock of amplitude eps = |p(v+) - p(v-)|
/// leaving the left state (v_minus, u_minus).
///
/// Two-shocks are computed directly.  One-shocks come from the reflection
/// x -> -x, u -> -u, sigma -> -sigma applied to the two-shock whose left state
/// is the one-shock's right state.
inline EndStates solve_rankine_hugoniot(double v_minus, double u_minus, double eps, Family family) {
  require_positive_volume(v_minus, "solve_rankine_hugoniot");
  if (!std::isfinite(u_minus)) throw domain_error("nonfinite", "u_minus must be finite");
  if (eps == 0.0) throw domain_error("degenerate_shock", "eps = 0: no shock connects identical states");
  if (!(eps > 0.0)) throw domain_error("eps_range", "shock amplitude eps must be positive");
  const double p_minus = 1.0 / v_minus;

  if (family == Family::two) {
    if (eps >= p_minus) {
      std::ostringstream os;
      os << "amplitude exceeds p(v_minus): eps = " << eps << " >= " << p_minus;
      throw domain_error("amplitude_too_large", os.str());
    }
    return detail::solve_two_shock(v_minus, u_minus, eps);
  }

  // Mirror: the reflected two-shock runs from v+ (with p(v+) = p- + eps) back to v-.
  const EndStates m = detail::solve_two_shock(1.0 / (p_minus + eps), 0.0, eps);
  EndStates s;
  s.family = Family::one;
  s.eps = eps;
  s.v_minus = v_minus;
  s.v_plus = m.v_minus;
  s.sigma = -m.sigma;
  s.u_minus = u_minus;
  // Reflected velocities are -u, up to the additive constant fixed by u_minus.
  s.u_plus = u_minus + (m.u_plus - m.u_minus);
  return s;
}

/// The inviscid step connecting the end states.
class RiemannShock {
 public:
  explicit RiemannShock(EndStates s) : s_(s) {}

  const EndStates& end_states() const noexcept { return s_; }

  /// (v, u) at self-similar coordinate xi = x - sigma t.  The jump point
  /// itself takes the left value.
  std::pair<double, double> operator()(double xi) const {
    if (xi <= 0.0) return {s_.v_minus, s_.u_minus};
    return {s_.v_plus, s_.u_plus};
  }

 private:
  EndStates s_;
};

}  // namespace shocklab
