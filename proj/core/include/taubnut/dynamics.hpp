#pragma once

#include <map>
#include <string>
#include <vector>

#include "taubnut/model.hpp"

// Classical trajectories and the reduced radial problem.
//
// Hamilton's equations for H = |q| p^2 / (2(eta+|q|)) - k/(eta+|q|):
//   dq_i/dt = |q| p_i / (eta + |q|),
//   dp_i/dt = -(q_i/|q|) [eta p^2/2 + k] / (eta + |q|)^2.
// After radial reduction (r, p_r, L^2) the motion is governed by
//   H = r (p_r^2 + L^2/r^2) / (2(eta+r)) - k/(eta+r)
// with effective potential U_eff(r) = L^2/(2 r (eta+r)) - k/(eta+r), flattened
// by the canonical pair Q = sqrt(r(eta+r)) + eta log(sqrt(r) + sqrt(r+eta)),
// P = sqrt(r/(eta+r)) p_r.

namespace taubnut {

// dq/dt and dp/dt written into dq, dp (resized).  Throws at |q| = 0.
void equations_of_motion(const PhaseState& state, const ModelParams& par,
                         std::vector<double>& dq, std::vector<double>& dp);

struct IntegrationOptions {
  double tol = 1e-12;       // per-step local error bound (absolute and relative)
  double max_step = 0.0;    // 0 selects t_end/512 (keeps event sampling dense)
  double initial_step = 1e-3;
};

// Recorded trajectory with per-integral relative drift.  Drift keys are
// "H", "C_upper_m" / "C_lower_m" (m = 2..N), "R_i" (i = 1..N).  Relative
// normalization uses per-family scales so orbits on which an integral vanishes
// identically (circular: R = 0; planar: trailing Casimirs = 0) are not divided
// by ~0: H by |H(0)|, Casimirs by max(L^2(0), eps), R_i by
// max(|R(0)|_inf, |eta H(0) + k|, eps).
struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::map<std::string, double> invariant_drift;
  bool collision_halted = false;
  double halt_time = 0.0;
  ModelParams params;
  IntegrationOptions options;
};

// Adaptive 8th-order Runge-Kutta (RKF78) with controlled per-step error.
// Collision orbits halt at r = 1e-8*eta (1e-10 when eta = 0) with the halt
// time recorded; persistent step-size underflow elsewhere throws
// std::runtime_error naming the reach time.  tol must lie in [1e-14, 1e-4].
Trajectory integrate(const PhaseState& initial, double t_end,
                     const IntegrationOptions& opts, const ModelParams& par);

// State at an arbitrary time, re-integrated from the nearest recorded sample.
PhaseState state_at(const Trajectory& traj, double t);

// Time between consecutive perihelion passages (sign changes of q.p from - to +),
// refined by bisection re-integration.  Throws std::runtime_error if fewer than
// two passages were recorded.
double radial_period(const Trajectory& traj);

// Minimal phase-space distance |(q,p)(t) - (q,p)(0)| over t in (T_r/2, t_end],
// refined by golden-section around the best recorded sample.  Superintegrability
// closes every bound orbit, so this is ~0 after one radial period.  Throws
// std::domain_error for unbound/collisional initial data (fewer than two
// turning points).
double orbit_closure(const Trajectory& traj);

// Reduced 1D radial problem at fixed L^2.
struct EffectiveProblem {
  double L2 = 0.0;
  ModelParams params;
};

// U_eff(r) = L^2/(2 r (eta+r)) - k/(eta+r).  Throws at r <= 0.
double effective_potential(double r, const EffectiveProblem& prob);

// H on reduced variables: r (p_r^2 + L^2/r^2) / (2(eta+r)) - k/(eta+r).
double radial_hamiltonian(double r, double p_r, double L2, const ModelParams& par);

// Positive roots of E r^2 + (E eta + k) r - L^2/2 = 0, sorted ascending.
// Empty when no classical motion exists at that energy.
std::vector<double> turning_points(double energy, const EffectiveProblem& prob);

// r_c = [L^2 + sqrt(L^4 + 2 k eta L^2)] / (2k), the unique critical point of
// U_eff.  Throws std::domain_error unless k > 0 and L^2 > 0.
double circular_radius(const EffectiveProblem& prob);

// Canonical flattening pair: Q(r) with dQ/dr = sqrt(1 + eta/r), and P = p_r/(dQ/dr).
double canonical_q(double r, const ModelParams& par);
double canonical_p(double r, double p_r, const ModelParams& par);

}  // namespace taubnut
