#include "taubnut/dynamics.hpp"

#include <boost/numeric/odeint.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "taubnut/integrals.hpp"

namespace taubnut {

namespace {

using state_vec = std::vector<double>;
namespace ode = boost::numeric::odeint;
using stepper_t = ode::runge_kutta_fehlberg78<state_vec>;
using controlled_t = ode::controlled_runge_kutta<stepper_t>;

state_vec pack(const PhaseState& s) {
  state_vec y(s.q.size() * 2);
  std::copy(s.q.begin(), s.q.end(), y.begin());
  std::copy(s.p.begin(), s.p.end(), y.begin() + s.q.size());
  return y;
}

PhaseState unpack(const state_vec& y) {
  const std::size_t n = y.size() / 2;
  PhaseState s;
  s.q.assign(y.begin(), y.begin() + n);
  s.p.assign(y.begin() + n, y.end());
  return s;
}

struct Flow {
  ModelParams par;
  void operator()(const state_vec& y, state_vec& dydt, double /*t*/) const {
    const std::size_t n = y.size() / 2;
    dydt.resize(2 * n);
    double r2 = 0.0, p2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r2 += y[i] * y[i];
      p2 += y[n + i] * y[n + i];
    }
    const double r = std::sqrt(r2);
    if (r == 0.0)
      throw std::domain_error("equations_of_motion: |q| = 0");
    const double s = par.eta + r;
    const double fq = r / s;
    const double fp = -(0.5 * par.eta * p2 + par.k) / (s * s * r);
    for (std::size_t i = 0; i < n; ++i) {
      dydt[i] = fq * y[n + i];
      dydt[n + i] = fp * y[i];
    }
  }
};

double radius_of(const state_vec& y) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < y.size() / 2; ++i) r2 += y[i] * y[i];
  return std::sqrt(r2);
}

// Advance y from t to t_target with per-step tolerance tol.  Throws on
// persistent step-size underflow.
void advance(state_vec& y, double& t, double t_target, double tol,
             const ModelParams& par, double max_step, double initial_step) {
  if (t_target <= t) return;
  Flow flow{par};
  controlled_t ctrl = ode::make_controlled<stepper_t>(tol, tol);
  double dt = std::min(initial_step, t_target - t);
  int rejects = 0;
  while (t < t_target) {
    dt = std::min({dt, max_step, t_target - t});
    if (ode::fail == ctrl.try_step(flow, y, t, dt)) {
      if (++rejects > 200 || dt < 1e-15 * std::max(1.0, std::abs(t)))
        throw std::runtime_error("integrate: step-size underflow at t = " +
                                 std::to_string(t) + " (r = " +
                                 std::to_string(radius_of(y)) + ")");
    } else {
      rejects = 0;
    }
  }
}

// Drift normalization scales per integral family (see Trajectory docs).
struct DriftScales {
  double energy, casimir, runge_lenz;
};

DriftScales drift_scales(const IntegralSet& ref, const ModelParams& par) {
  constexpr double eps = 1e-12;
  DriftScales sc;
  sc.energy = std::max(std::abs(ref.energy), eps);
  sc.casimir = std::max(ref.casimirs_upper.back(), eps);  // L^2 at t=0
  double rmax = 0.0;
  for (double v : ref.runge_lenz) rmax = std::max(rmax, std::abs(v));
  sc.runge_lenz = std::max({rmax, std::abs(par.eta * ref.energy + par.k), eps});
  return sc;
}

void update_drift(std::map<std::string, double>& drift, const IntegralSet& ref,
                  const DriftScales& sc, const IntegralSet& now) {
  auto bump = [&drift](const std::string& key, double dev) {
    double& d = drift[key];
    d = std::max(d, dev);
  };
  bump("H", std::abs(now.energy - ref.energy) / sc.energy);
  for (std::size_t i = 0; i < ref.casimirs_upper.size(); ++i) {
    const std::string m = std::to_string(i + 2);
    bump("C_upper_" + m,
         std::abs(now.casimirs_upper[i] - ref.casimirs_upper[i]) / sc.casimir);
    bump("C_lower_" + m,
         std::abs(now.casimirs_lower[i] - ref.casimirs_lower[i]) / sc.casimir);
  }
  for (std::size_t i = 0; i < ref.runge_lenz.size(); ++i)
    bump("R_" + std::to_string(i + 1),
         std::abs(now.runge_lenz[i] - ref.runge_lenz[i]) / sc.runge_lenz);
}

double halt_radius(const ModelParams& par) {
  return par.eta > 0.0 ? 1e-8 * par.eta : 1e-10;
}

}  // namespace

void equations_of_motion(const PhaseState& state, const ModelParams& par,
                         std::vector<double>& dq, std::vector<double>& dp) {
  const double r = radial_coordinate(state);
  const double p2 = dot(state.p, state.p);
  const double s = par.eta + r;
  const double fp = -(0.5 * par.eta * p2 + par.k) / (s * s * r);
  const std::size_t n = state.q.size();
  dq.resize(n);
  dp.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    dq[i] = r / s * state.p[i];
    dp[i] = fp * state.q[i];
  }
}

Trajectory integrate(const PhaseState& initial, double t_end,
                     const IntegrationOptions& opts, const ModelParams& par) {
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw std::invalid_argument("integrate: t_end must be positive and finite");
  if (!(opts.tol >= 1e-14 && opts.tol <= 1e-4))
    throw std::invalid_argument("integrate: tol must lie in [1e-14, 1e-4]");
  radial_coordinate(initial);  // validates shape and |q| > 0

  Trajectory traj;
  traj.params = par;
  traj.options = opts;
  if (traj.options.max_step <= 0.0) traj.options.max_step = t_end / 512.0;

  const IntegralSet ref = evaluate_integrals(initial, par);
  const DriftScales sc = drift_scales(ref, par);
  update_drift(traj.invariant_drift, ref, sc, ref);  // zero-initialize all keys

  Flow flow{par};
  controlled_t ctrl = ode::make_controlled<stepper_t>(opts.tol, opts.tol);
  state_vec y = pack(initial);
  double t = 0.0;
  double dt = std::min(opts.initial_step, traj.options.max_step);
  const double r_halt = halt_radius(par);

  traj.times.push_back(0.0);
  traj.states.push_back(initial);

  int rejects = 0;
  while (t < t_end) {
    dt = std::min({dt, traj.options.max_step, t_end - t});
    if (ode::fail == ctrl.try_step(flow, y, t, dt)) {
      if (++rejects > 200 || dt < 1e-15 * std::max(1.0, std::abs(t))) {
        // Persistent underflow with the radius collapsing means a collision
        // orbit reaching the metric singularity; anything else is an error.
        if (radius_of(y) < 1e-3 * radial_coordinate(initial)) {
          traj.collision_halted = true;
          traj.halt_time = t;
          return traj;
        }
        throw std::runtime_error("integrate: step-size underflow at t = " +
                                 std::to_string(t) + " (r = " +
                                 std::to_string(radius_of(y)) + ")");
      }
      continue;
    }
    rejects = 0;
    const PhaseState s = unpack(y);
    traj.times.push_back(t);
    traj.states.push_back(s);
    update_drift(traj.invariant_drift, ref, sc, evaluate_integrals(s, par));
    if (norm(s.q) < r_halt) {
      traj.collision_halted = true;
      traj.halt_time = t;
      break;
    }
  }
  return traj;
}

PhaseState state_at(const Trajectory& traj, double t) {
  if (traj.times.empty())
    throw std::invalid_argument("state_at: empty trajectory");
  if (t < traj.times.front() - 1e-12 || t > traj.times.back() + 1e-12)
    throw std::invalid_argument("state_at: time outside recorded range");
  t = std::clamp(t, traj.times.front(), traj.times.back());
  const auto it = std::upper_bound(traj.times.begin(), traj.times.end(), t);
  const std::size_t idx = (it == traj.times.begin())
                              ? 0
                              : static_cast<std::size_t>(it - traj.times.begin()) - 1;
  if (traj.times[idx] == t) return traj.states[idx];
  state_vec y = pack(traj.states[idx]);
  double tc = traj.times[idx];
  advance(y, tc, t, traj.options.tol, traj.params, traj.options.max_step,
          traj.options.initial_step);
  return unpack(y);
}

namespace {

// Perihelion passage times: zeros of s(t) = q.p crossing from - to +,
// located among recorded samples and refined by bisection re-integration.
std::vector<double> perihelion_times(const Trajectory& traj) {
  const auto radial_momentum = [&traj](std::size_t i) {
    return dot(traj.states[i].q, traj.states[i].p);
  };
  // Hysteresis threshold keeps roundoff noise on circular orbits (q.p ~ 0)
  // from faking crossings.  On such orbits max|q.p| is itself noise, so the
  // threshold also needs an absolute floor set by the phase-space magnitude.
  double amp = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    amp = std::max(amp, std::fabs(radial_momentum(i)));
    scale = std::max(scale, norm(traj.states[i].q) * norm(traj.states[i].p));
  }
  const double eps = 1e-9 * std::max(amp, scale);

  std::vector<double> out;
  bool armed = false;
  std::size_t last_neg = 0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double v = radial_momentum(i);
    if (v < -eps) {
      armed = true;
      last_neg = i;
      continue;
    }
    if (!armed || !(v >= eps)) continue;
    armed = false;
    // Bisection on [t_last_neg, t_i], integrating afresh from the left anchor.
    double lo = traj.times[last_neg], hi = traj.times[i];
    const state_vec anchor = pack(traj.states[last_neg]);
    for (int iter = 0; iter < 80 && (hi - lo) > 1e-14 * std::max(1.0, hi); ++iter) {
      const double mid = 0.5 * (lo + hi);
      state_vec y = anchor;
      double tc = traj.times[last_neg];
      advance(y, tc, mid, traj.options.tol, traj.params, traj.options.max_step,
              traj.options.initial_step);
      const PhaseState sm = unpack(y);
      if (dot(sm.q, sm.p) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

}  // namespace

double radial_period(const Trajectory& traj) {
  const std::vector<double> peri = perihelion_times(traj);
  if (peri.size() < 2)
    throw std::runtime_error(
        "radial_period: fewer than two perihelion passages recorded");
  return peri[1] - peri[0];
}

double orbit_closure(const Trajectory& traj) {
  if (traj.states.empty())
    throw std::invalid_argument("orbit_closure: empty trajectory");
  const PhaseState& s0 = traj.states.front();
  const EffectiveProblem prob{total_angular_momentum_sq(s0), traj.params};
  const double energy = hamiltonian(s0, traj.params);
  const std::vector<double> roots = turning_points(energy, prob);
  if (roots.size() < 2)
    throw std::domain_error("orbit_closure: orbit is not a bound non-collisional one");

  // Circular orbits recur at every time; no radial period to wait out.  The
  // gap threshold sits well above the O(sqrt(eps)) root split that rounding
  // produces at an exact tangency.
  const bool circular = roots[1] - roots[0] <= 1e-6 * roots[1];
  const double t_min = circular ? 0.0 : 0.5 * radial_period(traj);
  const auto dist_state = [&s0](const PhaseState& s) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < s0.q.size(); ++i) {
      d2 += (s.q[i] - s0.q[i]) * (s.q[i] - s0.q[i]);
      d2 += (s.p[i] - s0.p[i]) * (s.p[i] - s0.p[i]);
    }
    return std::sqrt(d2);
  };

  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    if (traj.times[i] <= t_min) continue;
    const double d = dist_state(traj.states[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  if (!std::isfinite(best_d))
    throw std::runtime_error("orbit_closure: no samples beyond half a radial period");

  // Golden-section refinement around the best recorded sample.
  double lo = traj.times[best > 0 ? best - 1 : 0];
  double hi = traj.times[std::min(best + 1, traj.times.size() - 1)];
  lo = std::max(lo, t_min + 1e-12);
  const auto dist_at = [&](double t) { return dist_state(state_at(traj, t)); };
  constexpr double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = dist_at(x1), f2 = dist_at(x2);
  for (int iter = 0; iter < 80 && (b - a) > 1e-12 * std::max(1.0, b); ++iter) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = dist_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = dist_at(x2);
    }
  }
  return std::min({best_d, f1, f2});
}

double effective_potential(double r, const EffectiveProblem& prob) {
  if (!(r > 0.0))
    throw std::domain_error("effective_potential: r must be > 0");
  if (prob.L2 < 0.0)
    throw std::invalid_argument("effective_potential: L2 must be >= 0");
  const double eta = prob.params.eta;
  return prob.L2 / (2.0 * r * (eta + r)) - prob.params.k / (eta + r);
}

double radial_hamiltonian(double r, double p_r, double L2, const ModelParams& par) {
  if (!(r > 0.0))
    throw std::domain_error("radial_hamiltonian: r must be > 0");
  return r * (p_r * p_r + L2 / (r * r)) / (2.0 * (par.eta + r)) -
         par.k / (par.eta + r);
}

std::vector<double> turning_points(double energy, const EffectiveProblem& prob) {
  if (prob.L2 < 0.0)
    throw std::invalid_argument("turning_points: L2 must be >= 0");
  const double a = energy;
  const double b = energy * prob.params.eta + prob.params.k;
  const double c = -0.5 * prob.L2;

  std::vector<double> roots;
  if (a == 0.0) {
    if (b != 0.0) roots.push_back(-c / b);
  } else {
    const double disc = b * b - 4.0 * a * c;
    // At the circular-orbit energy the discriminant is an exact zero that
    // rounding can push a few ulp negative; clamp so the tangency reports a
    // double root instead of an empty interval.
    const double disc_scale = b * b + std::abs(4.0 * a * c);
    if (disc >= -1e-12 * disc_scale) {
      const double sq = disc > 0.0 ? std::sqrt(disc) : 0.0;
      if (b == 0.0 && sq == 0.0) {
        roots.push_back(0.0);
      } else {
        const double qq = -0.5 * (b + std::copysign(sq, b));
        roots.push_back(qq / a);
        if (qq != 0.0) roots.push_back(c / qq);
      }
    }
  }
  std::vector<double> out;
  for (double r : roots)
    if (std::isfinite(r) && r > 0.0) out.push_back(r);
  std::sort(out.begin(), out.end());
  return out;
}

double circular_radius(const EffectiveProblem& prob) {
  const double k = prob.params.k;
  if (!(k > 0.0))
    throw std::domain_error("circular_radius: no circular orbit for k <= 0");
  if (!(prob.L2 > 0.0))
    throw std::domain_error("circular_radius: L2 must be > 0");
  const double L2 = prob.L2;
  return (L2 + std::sqrt(L2 * L2 + 2.0 * k * prob.params.eta * L2)) / (2.0 * k);
}

double canonical_q(double r, const ModelParams& par) {
  if (!(r > 0.0))
    throw std::domain_error("canonical_q: r must be > 0");
  return std::sqrt(r * (par.eta + r)) +
         par.eta * std::log(std::sqrt(r) + std::sqrt(r + par.eta));
}

double canonical_p(double r, double p_r, const ModelParams& par) {
  if (!(r > 0.0))
    throw std::domain_error("canonical_p: r must be > 0");
  return std::sqrt(r / (par.eta + r)) * p_r;
}

}  // namespace taubnut
