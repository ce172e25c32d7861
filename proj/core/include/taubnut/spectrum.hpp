#pragma once

#include <cstdint>

#include "taubnut/model.hpp"

// Closed-form bound spectrum and radial eigenfunctions.
//
// With the principal combination Ntilde = n + l + (N-1)/2 the bound energies
// solve the quadratic self-consistency E = -K^2/(2 hbar^2 Ntilde^2),
// K = k + eta E.  The physical branch is
//   E = [-hbar^2 Ntilde^2 - eta k + sqrt(hbar^4 Ntilde^4 + 2 eta k hbar^2 Ntilde^2)] / eta^2,
// evaluated here in the cancellation-free equivalent form
//   E = -k^2 / [hbar^2 Ntilde^2 + eta k + sqrt(hbar^4 Ntilde^4 + 2 eta k hbar^2 Ntilde^2)],
// which is exact for all eta >= 0 and reduces to -k^2/(2 hbar^2 Ntilde^2) at
// eta = 0.  Radial eigenfunctions are
//   psi_{n,l}(r) = C r^l exp(-K r/(hbar^2 Ntilde)) L_n^{2l+N-2}(2 K r/(hbar^2 Ntilde)),
// orthonormal under the weighted measure (1 + eta/r) r^{N-1} dr.

namespace taubnut {

struct QuantumLevel {
  int n = 0;            // radial quantum number
  int l = 0;            // angular momentum quantum number
  double energy = 0.0;  // E < 0
  double coupling = 0.0;  // K = k + eta E > 0
  int principal = 0;    // n + l
};

// Ntilde = n + l + (N-1)/2.
double nu_tilde(int n, int l, const ModelParams& par);

// Physical-branch bound energy (cancellation-free form).  Requires n, l >= 0
// and k > 0; throws std::domain_error otherwise.
double bound_energy(int n, int l, const ModelParams& par);

// The directly displayed "+"-branch form [-a - eta k + sqrt(a^2 + 2 eta k a)]/eta^2
// (a = hbar^2 Ntilde^2).  Cancellation-prone for small eta; requires eta > 0.
// Diagnostic only: unit tests pin its agreement with bound_energy.
double bound_energy_displayed(int n, int l, const ModelParams& par);

// The rejected "-" branch (diagnostic only; diverges as eta -> 0 and violates
// K > 0).  Requires eta > 0.
double bound_energy_minus_branch(int n, int l, const ModelParams& par);

// K = k + eta E.
double energy_coupling(double energy, const ModelParams& par);

// Assembles a validated level (E < 0, K > 0).
QuantumLevel make_level(int n, int l, const ModelParams& par);

// Generalized Laguerre polynomial L_n^alpha(x) by the three-term recurrence.
// Requires n >= 0 and alpha > -1.
double laguerre(int n, double alpha, double x);

// hbar^2 l (l + N - 2), the angular sector eigenvalue.
double angular_eigenvalue(int l, const ModelParams& par);

// Hyperspherical-harmonic multiplicity of fixed l, and the total degeneracy of
// the energy level with principal quantum number = n + l:
//   mult(N, l) = C(N+l-1, l) - C(N+l-3, l-2),  degeneracy = sum_{l<=principal} mult.
std::uint64_t level_multiplicity(int l, const ModelParams& par);
std::uint64_t degeneracy(int principal, const ModelParams& par);

// First-order small-eta expansion: -k^2/(2 hbar^2 Ntilde^2) + eta k^3/(2 hbar^4 Ntilde^4).
double perturbative_energy(int n, int l, const ModelParams& par);

// Normalized radial eigenfunction, evaluable at any r > 0 (finite limit at
// r -> 0+ for l = 0).
class RadialWavefunction {
 public:
  RadialWavefunction(const QuantumLevel& level, const ModelParams& par,
                     double normalization);

  double operator()(double r) const;   // normalized psi(r)
  double unnormalized(double r) const;  // psi(r) / normalization

  const QuantumLevel& level() const { return level_; }
  const ModelParams& params() const { return params_; }
  double normalization() const { return normalization_; }
  double decay_rate() const { return beta_; }  // K / (hbar^2 Ntilde)

 private:
  QuantumLevel level_;
  ModelParams params_;
  double normalization_;
  double beta_;
};

// Builds the level's eigenfunction with unit weighted norm
// (integral of psi^2 (1+eta/r) r^{N-1} dr = 1).
RadialWavefunction eigenfunction(const QuantumLevel& level, const ModelParams& par);

// Weighted scalar product <a, b> = integral a(r) b(r) (1 + eta/r) r^{N-1} dr,
// adaptive tanh-sinh quadrature with an envelope-derived truncation radius.
// Requires identical l and model parameters; throws std::invalid_argument
// otherwise and std::runtime_error if the quadrature fails to converge.
double inner_product(const RadialWavefunction& a, const RadialWavefunction& b);

// Number of strict sign changes of psi on (0, infinity); equals n.
int count_radial_nodes(const RadialWavefunction& psi);

}  // namespace taubnut
