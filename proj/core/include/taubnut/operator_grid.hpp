#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "taubnut/model.hpp"

// Grid-based verification of the quantum operator algebra in N = 2, 3.
//
// Operators act on complex fields over a Cartesian box that excludes the
// origin, with 4th-order central stencils.  Every derivative sweep invalidates
// two boundary layers; fields carry that margin and all norms/inner products
// are taken over the remaining interior.  Test functions vanish (below 1e-14)
// well inside the box, so margins only trim numerically-zero cells.
//
//   H f = (|q|/(2(eta+|q|))) (-hbar^2 Laplacian f - (2k/|q|) f)
//   p_a f = -i hbar d_a f
//   J_ij f = q_i (p_j f) - q_j (p_i f)
//   C^(m) f = sum_{i<j<m} J_ij (J_ij f)
//   R_i f = (1/2) sum_j [p_j (J_ji f) + J_ji (p_j f)] + (q_i/|q|)(eta H f + k f)
// and Theorem-level identities: [H, C^(m)] = [H, R_i] = 0,
// sum_i R_i^2 = 2 H (C^(N) + hbar^2 (N-1)^2/4) + (eta H + k)^2.

namespace taubnut {

struct GridSpec {
  int dim = 2;                     // 2 or 3
  std::array<double, 3> lo{};     // lower corner (unused axis entries 0)
  std::array<int, 3> n{};         // nodes per axis (n[2] = 1 when dim = 2)
  double h = 0.0;                  // isotropic mesh step

  // Throws std::invalid_argument unless dim is 2 or 3, every active axis has
  // >= 16 nodes, h > 0 and the closed box excludes the origin.
  GridSpec(int dim, std::array<double, 3> lo, std::array<int, 3> n, double h);

  std::size_t size() const;
  std::size_t index(int i, int j, int k) const;
  double coordinate(int axis, int i) const { return lo[axis] + i * h; }
  double side(int axis) const { return (n[axis] - 1) * h; }
};

// Canonical off-origin box: dim 2 covers [0.8, 3.2] x [-0.4, 2.0], dim 3
// covers [0.9, 2.9] x [-1, 1]^2, with `points` nodes per axis.
GridSpec default_grid(int dim, int points);

struct GridField {
  GridSpec spec;
  int margin = 0;  // boundary layers already invalidated by stencils
  std::vector<std::complex<double>> values;
};

GridField make_field(
    const GridSpec& spec,
    const std::function<std::complex<double>(double, double, double)>& f);

// Deterministic smooth test field: three Gaussian bumps times degree-<=2
// polynomials with complex coefficients, centered off-boundary so values fall
// below 1e-14 within four cells of every face.
GridField random_test_field(const GridSpec& spec, std::uint64_t seed);

// Field algebra (specs must match; margins combine as max).
GridField operator+(const GridField& a, const GridField& b);
GridField operator-(const GridField& a, const GridField& b);
GridField operator*(std::complex<double> c, const GridField& f);

GridField apply_hamiltonian(const GridField& f, const ModelParams& par);
GridField apply_momentum(const GridField& f, int axis, const ModelParams& par);
GridField apply_angular(const GridField& f, int i, int j, const ModelParams& par);
GridField apply_casimir(const GridField& f, int m, const ModelParams& par);
GridField apply_runge_lenz(const GridField& f, int i, const ModelParams& par);

// Weighted discrete norms/products with weight 1 + eta/|q| and measure h^dim,
// over cells at least `margin` layers from every face (field margins by default).
double weighted_norm(const GridField& f, const ModelParams& par, int margin = -1);
std::complex<double> weighted_inner_product(const GridField& a, const GridField& b,
                                            const ModelParams& par, int margin = -1);

using GridOperator = std::function<GridField(const GridField&)>;

// ||A(B f) - B(A f)||_w / ||f||_w, both norms over the commutator's margin.
double commutator_residual(const GridOperator& a, const GridOperator& b,
                           const GridField& f, const ModelParams& par);

// |<phi, H psi>_w - <H phi, psi>_w| / (||phi||_w ||psi||_w).
double hamiltonian_self_adjointness_residual(const GridField& phi,
                                             const GridField& psi,
                                             const ModelParams& par);

// ||(sum_i R_i^2 - 2 H (C^(N) + hbar^2 (N-1)^2/4) - (eta H + k)^2) f||_w / ||f||_w.
double quantum_runge_lenz_identity_residual(const GridField& f,
                                            const ModelParams& par);

}  // namespace taubnut
