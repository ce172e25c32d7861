#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "taubnut/model.hpp"

// The 2N-1 constants of motion of the deformed Kepler-Coulomb Hamiltonian:
//   J_ij = q_i p_j - q_j p_i                        (angular momenta),
//   C^(m) = sum_{1<=i<j<=m} J_ij^2                  (leading-block Casimirs),
//   C_(m) = sum_{N-m<i<j<=N} J_ij^2                 (trailing-block Casimirs),
//   R_i  = sum_j p_j (q_j p_i - q_i p_j) + (q_i/|q|)(eta H + k)   (Runge-Lenz),
// obeying R^2 = 2 L^2 H + (eta H + k)^2 with L^2 = C^(N) = C_(N).
// A finite-difference Poisson-bracket engine verifies the algebra numerically.

namespace taubnut {

// J_ij with 0-based indices.
double angular_momentum(const PhaseState& state, int i, int j);

// (C^(m), C_(m)) for 2 <= m <= N; both equal L^2 at m = N.
std::pair<double, double> angular_casimirs(const PhaseState& state, int m);

// L^2 = C^(N).
double total_angular_momentum_sq(const PhaseState& state);

// Runge-Lenz vector; throws std::domain_error at the origin.
std::vector<double> runge_lenz(const PhaseState& state, const ModelParams& par);

// |R^2 - 2 L^2 H - (eta H + k)^2| / max(|R^2|, |2 L^2 H|, (eta H + k)^2).
double runge_lenz_identity_residual(const PhaseState& state, const ModelParams& par);

// Full integral set evaluated at one state (used by the drift monitor).
struct IntegralSet {
  std::vector<double> casimirs_upper;  // C^(m), m = 2..N
  std::vector<double> casimirs_lower;  // C_(m), m = 2..N
  std::vector<double> runge_lenz;      // R_1..R_N
  double energy = 0.0;                 // H
};
IntegralSet evaluate_integrals(const PhaseState& state, const ModelParams& par);

// Observables are plain evaluation callables; no expression trees.
using Observable = std::function<double(const PhaseState&)>;

Observable hamiltonian_observable(const ModelParams& par);
Observable angular_momentum_observable(int i, int j);
Observable casimir_upper_observable(int m);
Observable casimir_lower_observable(int m, int dim);
Observable runge_lenz_observable(int i, const ModelParams& par);

// Gradient of f with respect to (q_1..q_N, p_1..p_N), central differences with
// one Richardson step; base step 1e-4 * max(1, |state|_inf).
std::vector<double> observable_gradient(const Observable& f, const PhaseState& at);

// {f, g} = sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i).  Absolute accuracy
// ~1e-8 for smooth O(1) observables at O(1) states.
double poisson_bracket(const Observable& f, const Observable& g, const PhaseState& at);

// Numerical rank of the Jacobian of {H, C^(2..N), C_(2..N-1), R_1} with respect
// to (q, p), gradients stacked over all samples; rank counts singular values
// above 1e-8 times the largest.  Full rank (general-position samples) is 2N-1;
// degenerate sample sets (e.g. all-radial) report a smaller rank.
int functional_independence_rank(const std::vector<PhaseState>& samples,
                                 const ModelParams& par);

// Deterministic random states in general position: |q| uniform in [0.5, 2],
// direction uniform on the sphere, p components uniform in [-p_scale, p_scale].
// Identical bits for identical (count, dim, seed) on every platform.
std::vector<PhaseState> sample_states(int count, int dim, std::uint64_t seed,
                                      double p_scale = 1.0);

}  // namespace taubnut
