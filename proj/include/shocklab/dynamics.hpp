#pragma once

// Method-of-lines solver for the isothermal Navier-Stokes system in the
// frame moving with the shock, in the variables (v, h):
//
//   v_t - sigma v_xi - h_xi = nu (v^{-(1+alpha)} v_xi)_xi
//   h_t - sigma h_xi + p(v)_xi = 0
//
// Hyperbolic part: MUSCL reconstruction with a Rusanov flux.  Diffusion:
// central differences with face-averaged diffusivity.  Time: classical RK4.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shocklab/error.hpp"
#include "shocklab/grid.hpp"
#include "shocklab/model.hpp"
#include "shocklab/profiles.hpp"

namespace shocklab {

struct FieldState {
  Grid grid;
  Vec v, h;
  double t = 0.0;
  GasModel model;
  double nu = 1.0;

  std::size_t size() const noexcept { return v.size(); }

  /// Velocity recovered from the effective velocity: u = h + nu v_xi / v^{1+alpha}.
  Vec u() const {
    const Vec dv = derivative(v, grid.dx());
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = h[i] + nu * dv[i] / std::pow(v[i], 1.0 + model.alpha());
    return out;
  }
};

/// The profile itself as a field.
inline FieldState profile_state(const ShockProfile& P) {
  FieldState s;
  s.grid = P.grid;
  s.v = P.v_tilde;
  s.h = P.h_tilde;
  s.model = P.model;
  s.nu = P.nu;
  return s;
}

enum class BumpField { v, h };
enum class BumpShape { gaussian, sine_packet };

struct Bump {
  BumpField field = BumpField::v;
  BumpShape shape = BumpShape::gaussian;
  double center = 0.0;
  double width = 1.0;
  double amplitude = 0.0;

  double operator()(double x) const {
    const double r = (x - center) / width;
    const double g = std::exp(-r * r);
    if (shape == BumpShape::gaussian) return amplitude * g;
    return amplitude * std::sin(2.0 * std::numbers::pi * r) * g;
  }
  // exp(-r^2) < 1e-12 beyond this many widths.
  static double support_widths() { return std::sqrt(12.0 * std::log(10.0)); }
};

struct PerturbationSpec {
  std::vector<Bump> bumps;

  bool empty() const { return bumps.empty(); }

  /// Every bump must be supported (to 1e-12) inside [-L/2, L/2].
  void validate(double L) const {
    for (const auto& b : bumps) {
      if (!(b.width > 0.0)) throw domain_error("bump_width", "bump width must be positive");
      const double r = Bump::support_widths() * b.width;
      if (b.center - r < -0.5 * L || b.center + r > 0.5 * L) {
        std::ostringstream os;
        os << "bump at " << b.center << " with width " << b.width << " is not supported inside [-L/2, L/2]";
        throw domain_error("bump_support", os.str());
      }
    }
  }

  void apply(FieldState& s) const {
    for (const auto& b : bumps) {
      Vec& f = b.field == BumpField::v ? s.v : s.h;
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += b(s.grid.x(i));
    }
  }
};

/// Profile plus perturbation.
inline FieldState perturbed_profile(const ShockProfile& P, const PerturbationSpec& spec) {
  spec.validate(P.grid.half_length());
  FieldState s = profile_state(P);
  spec.apply(s);
  return s;
}

struct MonitorRecord {
  double t = 0.0;
  double min_v = 0.0;
  double max_v = 0.0;
  double entropy_residual = 0.0;
  double mass_defect = 0.0;
  double boundary_leak = 0.0;
};

enum class Limiter { van_leer, minmod };

struct SolverOptions {
  double cfl = 0.4;
  double positivity_floor = 1e-6;
  Limiter limiter = Limiter::van_leer;
  // Subtract the discrete residual of the profile so that it is an exact
  // steady state of the scheme.  The correction is a difference of face
  // fluxes, so conservation is unaffected.
  bool well_balanced = true;
};

/// Time integrals over one step of the face fluxes at the two boundary faces
/// (well-balanced form when enabled).
struct BoundaryFlux {
  double v_left = 0.0, v_right = 0.0, h_left = 0.0, h_right = 0.0;
};

namespace detail {

inline double limit(double a, double b, Limiter lim) {
  if (a * b <= 0.0) return 0.0;
  if (lim == Limiter::van_leer) return 2.0 * a * b / (a + b);
  return std::abs(a) < std::abs(b) ? a : b;
}

}  // namespace detail

class Solver {
 public:
  Solver(const ShockProfile& profile, SolverOptions opt = {}) : P_(&profile), opt_(opt) {
    const std::size_t n = profile.size();
    if (n < 4) throw domain_error("grid_size", "solver needs at least 4 nodes");
    fv_.assign(n - 1, 0.0);
    fh_.assign(n - 1, 0.0);
    fv_ref_.assign(n - 1, 0.0);
    fh_ref_.assign(n - 1, 0.0);
    if (opt_.well_balanced) {
      face_fluxes(profile.v_tilde, profile.h_tilde, fv_ref_, fh_ref_);
    }
  }

  const ShockProfile& profile() const noexcept { return *P_; }
  const SolverOptions& options() const noexcept { return opt_; }

  /// dv/dt and dh/dt at all nodes; boundary nodes are pinned (zero rate).
  void rhs(const Vec& v, const Vec& h, Vec& dv, Vec& dh) const {
    check_positive(v);
    face_fluxes(v, h, fv_, fh_);
    const std::size_t n = v.size();
    dv.assign(n, 0.0);
    dh.assign(n, 0.0);
    const double inv_dx = 1.0 / P_->dx();
    for (std::size_t i = 1; i + 1 < n; ++i) {
      dv[i] = -((fv_[i] - fv_ref_[i]) - (fv_[i - 1] - fv_ref_[i - 1])) * inv_dx;
      dh[i] = -((fh_[i] - fh_ref_[i]) - (fh_[i - 1] - fh_ref_[i - 1])) * inv_dx;
    }
  }

  /// Boundary face fluxes from the most recent rhs() call.
  BoundaryFlux last_boundary_flux() const {
    const std::size_t m = fv_.size() - 1;
    return {fv_[0] - fv_ref_[0], fv_[m] - fv_ref_[m], fh_[0] - fh_ref_[0], fh_[m] - fh_ref_[m]};
  }

  /// dt = cfl * min(dx / s_max, dx^2 (min v)^{1+alpha} / (2 nu)).
  double stable_dt(const Vec& v) const {
    double vmin = std::numeric_limits<double>::infinity();
    for (double x : v) vmin = std::min(vmin, x);
    const double dx = P_->dx();
    const double smax = std::abs(P_->end_states.sigma) + 1.0 / vmin;
    const double diff = dx * dx * std::pow(vmin, 1.0 + P_->model.alpha()) / (2.0 * P_->nu);
    return opt_.cfl * std::min(dx / smax, diff);
  }

  /// Classical RK4 step of the PDE, optionally co-integrating one scalar
  /// ODE X' = g(v, h, X) with the same stages.  Returns the new X.
  using ScalarRhs = std::function<double(const Vec& v, const Vec& h, double X)>;
  double step(FieldState& s, double dt, BoundaryFlux* flux = nullptr, double X = 0.0,
              const ScalarRhs& g = nullptr, std::array<double, 4>* stage_rates = nullptr) const {
    const std::size_t n = s.size();
    static constexpr std::array<double, 4> c{0.0, 0.5, 0.5, 1.0};
    static constexpr std::array<double, 4> w{1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
    acc_v_.assign(n, 0.0);
    acc_h_.assign(n, 0.0);
    BoundaryFlux bf;
    double accX = 0.0;
    for (int k = 0; k < 4; ++k) {
      const Vec* sv = &s.v;
      const Vec* sh = &s.h;
      double Xk = X;
      if (k > 0) {
        tv_.resize(n);
        th_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          tv_[i] = s.v[i] + c[k] * dt * kv_[i];
          th_[i] = s.h[i] + c[k] * dt * kh_[i];
        }
        sv = &tv_;
        sh = &th_;
        Xk = X + c[k] * dt * kX_;
      }
      try {
        rhs(*sv, *sh, kv_, kh_);
      } catch (const Error& e) {
        std::ostringstream os;
        os << e.what() << " at t = " << s.t + c[k] * dt;
        throw Error(e.kind(), e.code(), os.str());
      }
      kX_ = g ? g(*sv, *sh, Xk) : 0.0;
      if (stage_rates) (*stage_rates)[k] = kX_;
      const BoundaryFlux b = last_boundary_flux();
      bf.v_left += w[k] * dt * b.v_left;
      bf.v_right += w[k] * dt * b.v_right;
      bf.h_left += w[k] * dt * b.h_left;
      bf.h_right += w[k] * dt * b.h_right;
      for (std::size_t i = 0; i < n; ++i) {
        acc_v_[i] += w[k] * kv_[i];
        acc_h_[i] += w[k] * kh_[i];
      }
      accX += w[k] * kX_;
    }
    for (std::size_t i = 0; i < n; ++i) {
      s.v[i] += dt * acc_v_[i];
      s.h[i] += dt * acc_h_[i];
      if (!std::isfinite(s.v[i]) || !std::isfinite(s.h[i])) {
        std::ostringstream os;
        os << "numerical blow-up at t = " << s.t + dt << " (node " << i << ")";
        throw numerical_error("blowup", os.str());
      }
    }
    s.t += dt;
    if (flux) *flux = bf;
    const double Xn = X + dt * accX;
    if (!std::isfinite(Xn)) throw numerical_error("blowup", "shift became non-finite");
    return Xn;
  }

 private:
  void check_positive(const Vec& v) const {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > opt_.positivity_floor)) {
        std::ostringstream os;
        os << "vacuum proximity: v = " << v[i] << " at xi = " << P_->xi(i) << " below floor "
           << opt_.positivity_floor;
        throw numerical_error("vacuum", os.str());
      }
    }
  }

  // Total face flux for v (hyperbolic minus diffusive) and h at faces i+1/2.
  void face_fluxes(const Vec& v, const Vec& h, Vec& fv, Vec& fh) const {
    const std::size_t n = v.size();
    const double sigma = P_->end_states.sigma;
    const double nu = P_->nu;
    const double ap1 = 1.0 + P_->model.alpha();
    const double inv_dx = 1.0 / P_->dx();
    slope_v_.assign(n, 0.0);
    slope_h_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      slope_v_[i] = detail::limit(v[i] - v[i - 1], v[i + 1] - v[i], opt_.limiter);
      slope_h_[i] = detail::limit(h[i] - h[i - 1], h[i + 1] - h[i], opt_.limiter);
    }
    diff_.resize(n);
    for (std::size_t i = 0; i < n; ++i) diff_[i] = ap1 == 1.0 ? 1.0 / v[i] : std::pow(v[i], -ap1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double vl = v[i] + 0.5 * slope_v_[i], vr = v[i + 1] - 0.5 * slope_v_[i + 1];
      const double hl = h[i] + 0.5 * slope_h_[i], hr = h[i + 1] - 0.5 * slope_h_[i + 1];
      const double pl = 1.0 / vl, pr = 1.0 / vr;
      const double s = std::abs(sigma) + std::max(pl, pr);
      const double f1 = 0.5 * ((-sigma * vl - hl) + (-sigma * vr - hr)) - 0.5 * s * (vr - vl);
      const double f2 = 0.5 * ((-sigma * hl + pl) + (-sigma * hr + pr)) - 0.5 * s * (hr - hl);
      const double g = nu * 0.5 * (diff_[i] + diff_[i + 1]) * (v[i + 1] - v[i]) * inv_dx;
      fv[i] = f1 - g;
      fh[i] = f2;
    }
  }

  const ShockProfile* P_;
  SolverOptions opt_;
  Vec fv_ref_, fh_ref_;
  mutable Vec fv_, fh_, slope_v_, slope_h_, diff_;
  mutable Vec kv_, kh_, tv_, th_, acc_v_, acc_h_;
  mutable double kX_ = 0.0;
};

/// Entropy eta = h^2/2 - log v of the (v, h) system and its balance
///   eta_t - (sigma eta - p h + p v^beta p_xi)_xi = -v^beta p_xi^2.
struct EntropyBudget {
  double total = 0.0;        // trapezoid integral of eta
  double boundary = 0.0;     // [sigma eta - p h + p v^beta p_xi] between the ends
  double dissipation = 0.0;  // trapezoid integral of v^beta p_xi^2
};

inline EntropyBudget entropy_budget(const FieldState& s, double sigma) {
  const std::size_t n = s.size();
  const double dx = s.grid.dx();
  const double beta = s.model.beta();
  Vec p(n), eta(n), dis(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = 1.0 / s.v[i];
    eta[i] = 0.5 * s.h[i] * s.h[i] - std::log(s.v[i]);
  }
  const Vec dp = derivative(p, dx);
  for (std::size_t i = 0; i < n; ++i) dis[i] = s.nu * std::pow(s.v[i], beta) * dp[i] * dp[i];
  auto q = [&](std::size_t i) {
    return sigma * eta[i] - p[i] * s.h[i] + s.nu * p[i] * std::pow(s.v[i], beta) * dp[i];
  };
  EntropyBudget b;
  b.total = trapezoid(eta, dx);
  b.dissipation = trapezoid(dis, dx);
  b.boundary = q(n - 1) - q(0);
  return b;
}

struct SimulationConfig {
  EndStates end_states;
  GasModel model;
  double L = 400.0;
  std::size_t N = 4096;
  double nu = 1.0;
  double T = 0.0;
  double snapshot_cadence = 0.0;  // <= 0: only initial and final snapshots
  SolverOptions solver;
  PerturbationSpec perturbation;
};

struct Trajectory {
  std::vector<FieldState> snapshots;
  std::vector<MonitorRecord> monitors;
};

/// Runs one simulation and tracks monitors after every step.
class Simulation {
 public:
  Simulation(const ShockProfile& P, FieldState initial, SolverOptions opt = {})
      : solver_(P, opt), state_(std::move(initial)) {
    require_same_size(state_.size(), P.size(), "Simulation");
    mass_v0_ = interior_mass(state_.v, P.v_tilde);
    mass_h0_ = interior_mass(state_.h, P.h_tilde);
    ent_ = entropy_budget(state_, P.end_states.sigma);
  }

  const FieldState& state() const noexcept { return state_; }
  const Solver& solver() const noexcept { return solver_; }
  double dt() const { return solver_.stable_dt(state_.v); }

  /// One RK4 step of size dt; returns the new monitor record.
  MonitorRecord advance(double dt, double* X = nullptr, const Solver::ScalarRhs& g = nullptr,
                        std::array<double, 4>* stage_rates = nullptr) {
    BoundaryFlux bf;
    const double Xn = solver_.step(state_, dt, &bf, X ? *X : 0.0, g, stage_rates);
    if (X) *X = Xn;
    flux_v_ += bf.v_right - bf.v_left;
    flux_h_ += bf.h_right - bf.h_left;
    const auto& P = solver_.profile();
    MonitorRecord m;
    m.t = state_.t;
    m.min_v = *std::min_element(state_.v.begin(), state_.v.end());
    m.max_v = *std::max_element(state_.v.begin(), state_.v.end());
    if (m.min_v <= solver_.options().positivity_floor) {
      std::ostringstream os;
      os << "vacuum proximity at t = " << state_.t << ": min v = " << m.min_v;
      throw numerical_error("vacuum", os.str());
    }
    // Interior mass changes only through the two boundary faces.
    const double dmv = interior_mass(state_.v, P.v_tilde) - mass_v0_ + flux_v_;
    const double dmh = interior_mass(state_.h, P.h_tilde) - mass_h0_ + flux_h_;
    m.mass_defect = std::max(std::abs(dmv), std::abs(dmh));
    const EntropyBudget e = entropy_budget(state_, P.end_states.sigma);
    const double rate = (e.total - ent_.total) / dt;
    const double balance = 0.5 * (e.boundary + ent_.boundary) - 0.5 * (e.dissipation + ent_.dissipation);
    m.entropy_residual = rate - balance;
    ent_ = e;
    m.boundary_leak = boundary_leak(state_, P);
    return m;
  }

  static double boundary_leak(const FieldState& s, const ShockProfile& P) {
    const double L = P.grid.half_length();
    double leak = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (std::abs(P.xi(i)) < 0.75 * L) continue;
      leak = std::max({leak, std::abs(s.v[i] - P.v_tilde[i]), std::abs(s.h[i] - P.h_tilde[i])});
    }
    return leak;
  }

 private:
  double interior_mass(const Vec& f, const Vec& ref) const {
    double m = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) m += f[i] - ref[i];
    return m * state_.grid.dx();
  }

  Solver solver_;
  FieldState state_;
  double mass_v0_ = 0.0, mass_h0_ = 0.0;
  double flux_v_ = 0.0, flux_h_ = 0.0;
  EntropyBudget ent_;
};

/// Step sizes that land exactly on every multiple of `cadence` and on T.
class TimeGrid {
 public:
  TimeGrid(double T, double cadence) : T_(T), cadence_(cadence > 0.0 ? cadence : T) {}

  /// Next step size from t given the stable dt; sets `hit` when the step
  /// ends on an output time.
  double next(double t, double dt_stable, bool& hit) const {
    const double target = next_output(t);
    const double remaining = target - t;
    if (dt_stable >= remaining * (1.0 - 1e-12)) {
      hit = true;
      return remaining;
    }
    hit = false;
    // Spread the remaining interval evenly to avoid a tiny final step.
    const double steps = std::ceil(remaining / dt_stable);
    return remaining / steps;
  }

  double next_output(double t) const {
    if (cadence_ <= 0.0) return T_;
    const double k = std::floor(t / cadence_ * (1.0 + 1e-12) + 1e-12) + 1.0;
    return std::min(T_, k * cadence_);
  }

  bool done(double t) const { return t >= T_ * (1.0 - 1e-14) - 1e-300; }

 private:
  double T_;
  double cadence_;
};

inline Trajectory simulate(const SimulationConfig& cfg) {
  if (!(cfg.T >= 0.0)) throw domain_error("time_range", "final time must be nonnegative");
  ProfileOptions popt;
  popt.nu = cfg.nu;
  const ShockProfile P = build_profile(cfg.end_states, cfg.model, cfg.L, cfg.N, popt);
  FieldState s0 = perturbed_profile(P, cfg.perturbation);
  Simulation sim(P, s0, cfg.solver);
  Trajectory tr;
  tr.snapshots.push_back(s0);
  MonitorRecord m0;
  m0.t = 0.0;
  m0.min_v = *std::min_element(s0.v.begin(), s0.v.end());
  m0.max_v = *std::max_element(s0.v.begin(), s0.v.end());
  m0.boundary_leak = Simulation::boundary_leak(s0, P);
  tr.monitors.push_back(m0);
  if (cfg.T == 0.0) return tr;
  const TimeGrid tg(cfg.T, cfg.snapshot_cadence);
  while (!tg.done(sim.state().t)) {
    bool hit = false;
    const double dt = tg.next(sim.state().t, sim.dt(), hit);
    tr.monitors.push_back(sim.advance(dt));
    if (hit) tr.snapshots.push_back(sim.state());
  }
  return tr;
}

}  // namespace shocklab
