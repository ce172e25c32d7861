#pragma once

#include <vector>

#include "taubnut/model.hpp"

// Independent validation oracle for the closed-form spectrum: the radial
// Schrodinger problem
//   (r/(2(eta+r))) (-hbar^2 psi'' - hbar^2 (N-1)/r psi' + hbar^2 l(l+N-2)/r^2 psi
//                   - 2k/r psi) = E psi
// is brought to Sturm-Liouville form by u(r) = r^{(N-1)/2} psi(r), which removes
// the first-derivative term:
//   -(hbar^2/2) u'' + [hbar^2 (l(l+N-2) + (N-1)(N-3)/4)/(2 r^2) - k/r] u
//        = E (1 + eta/r) u,
// then discretized with second-order central differences and Dirichlet ends,
// giving a generalized eigenproblem A u = E B u with A symmetric tridiagonal
// and B diagonal positive (the weight 1 + eta/r).

namespace taubnut {

struct RadialGrid {
  double r_min = 0.0;
  double r_max = 0.0;
  int points = 0;

  RadialGrid(double r_min, double r_max, int points);

  double h() const { return (r_max - r_min) / (points - 1); }
  double r(int i) const { return r_min + i * h(); }
};

struct DiscretizedRadialProblem {
  std::vector<double> diag;    // A diagonal over interior nodes (points-2)
  std::vector<double> off;     // A first off-diagonal (points-3)
  std::vector<double> weight;  // B diagonal, 1 + eta/r_i > 0
  RadialGrid grid;
  int l = 0;
  ModelParams params;
};

// Centrifugal strength of the reduced problem: l(l+N-2) + (N-1)(N-3)/4.
double reduced_centrifugal_coefficient(int l, const ModelParams& par);

DiscretizedRadialProblem discretize(int l, const ModelParams& par,
                                    const RadialGrid& grid);

struct RadialEigenpair {
  double energy = 0.0;
  std::vector<double> u;  // interior-node values, unit discrete B-norm u^T B u = 1
};

// The `count` algebraically smallest generalized eigenvalues of (A, B) with
// B-orthonormal eigenvectors, via bisection plus inverse iteration on the
// symmetrically reduced tridiagonal pencil.  Deterministic; sign fixed so the
// first significant component is positive.  Throws std::runtime_error on
// LAPACK failure.
std::vector<RadialEigenpair> lowest_eigenpairs(const DiscretizedRadialProblem& prob,
                                               int count);

// Weighted-L2 residual ||(op - E) psi||_w / ||psi||_w over interior grid nodes,
// with the radial operator applied by second-order differences directly to psi
// samples (full-grid, size grid.points) and weight (1+eta/r) r^{N-1} h.
double residual_norm(const std::vector<double>& psi_samples, double energy, int l,
                     const ModelParams& par, const RadialGrid& grid);

// Grid tailored to level (n, l): r_max = 8x the outer classical turning point
// of the reduced problem at the level's formula energy, r_min = 1e-9 times the
// Bohr-like radius hbar^2/K (small enough that the inner-wall eigenvalue shift,
// linear in r_min when u ~ r, sits far below discretization error).
RadialGrid default_level_grid(int n, int l, const ModelParams& par,
                              int points = 6000);

}  // namespace taubnut
