#pragma once

#include <vector>

// Eta-deformed Kepler-Coulomb system on a conformally flat space.
//
// Configuration space is R^N \ {0} (N >= 2) with the Taub-NUT-type metric
//   ds^2 = (1 + eta/|q|) dq^2,   conformal factor f(r) = sqrt(1 + eta/r),
// and the classical Hamiltonian
//   H = |q| p^2 / (2 (eta + |q|)) - k / (eta + |q|).
// eta >= 0 is a deformation length; eta = 0 is the flat Kepler-Coulomb limit.
// The origin r = 0 is a genuine metric singularity and is excluded everywhere.

namespace taubnut {

struct ModelParams {
  double eta = 0.0;   // deformation length, >= 0
  double k = 1.0;     // Coulomb coupling strength
  double hbar = 1.0;  // reduced Planck constant, > 0 (quantum modules)
  int dim = 3;        // spatial dimension N, >= 2

  ModelParams() = default;
  // Throws std::invalid_argument on eta < 0, hbar <= 0, dim < 2 or non-finite input.
  ModelParams(double eta, double k, double hbar, int dim);
};

bool operator==(const ModelParams& a, const ModelParams& b);

struct PhaseState {
  std::vector<double> q;  // Cartesian position, length N
  std::vector<double> p;  // conjugate momentum, length N
};

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm(const std::vector<double>& v);

// Radius |q|; throws std::domain_error at the origin (and on q/p size mismatch).
double radial_coordinate(const PhaseState& state);

// H = |q| p^2 / (2(eta+|q|)) - k/(eta+|q|).  Throws std::domain_error at |q| = 0.
double hamiltonian(const PhaseState& state, const ModelParams& par);

// Square of the conformal factor, 1 + eta/r.  Throws std::domain_error at r <= 0.
double metric_factor(double r, const ModelParams& par);

// f(r) = sqrt(1 + eta/r).
double conformal_factor(double r, const ModelParams& par);

// Scalar curvature of ds^2 = (1+eta/r) dq^2 in dimension dim:
//   R(r) = eta (N-1) [4(N-3) r + 3(N-2) eta] / (4 r (eta+r)^3).
// Identically zero for eta = 0 (flat space) and for the degenerate dim = 1.
double scalar_curvature(double r, double eta, int dim);
double scalar_curvature(double r, const ModelParams& par);

// Radial Green function of the curved Laplacian: the antiderivative of
// 1/(r^2 f(r)) with zero integration constant,
//   U(r) = -(2/eta) sqrt(1 + eta/r)   (eta > 0),   U(r) = -1/r   (eta = 0).
// Only differences of U matter downstream; the constant is a documented choice.
double green_radial(double r, const ModelParams& par);

// dU/dr = 1 / (r^2 f(r)).
double green_radial_derivative(double r, const ModelParams& par);

// Intrinsic potential pair on the curved space, defined through the Green
// function: the Kepler-Coulomb branch is affine in f(r) = sqrt(1+eta/r) and the
// oscillator branch affine in 1/U(r)^2 = eta^2 r / (4(r+eta))  (constants absorb
// the eta^2/4):
//   U_KC(r) = A f(r) + B,     U_O(r) = C r/(r+eta) + D.
struct IntrinsicConstants {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
};
struct IntrinsicPotentials {
  double kepler_coulomb = 0.0;
  double oscillator = 0.0;
};
IntrinsicPotentials intrinsic_potentials(double r, const ModelParams& par,
                                         const IntrinsicConstants& c);

// The identification C = k/eta, D = -C that makes the oscillator branch equal
// the deformed Coulomb potential -k/(eta+r) appearing in H.  Undefined at
// eta = 0: throws std::domain_error there (the flat limit needs no rescaling).
IntrinsicConstants deformed_coulomb_constants(const ModelParams& par);

// Hyperspherical chart on R^N \ {0}:
//   q_j = r cos(theta_j) prod_{k<j} sin(theta_k)  (j = 1..N-1),
//   q_N = r prod_{k=1}^{N-1} sin(theta_k),
// with theta_1..theta_{N-2} in [0, pi] and theta_{N-1} in [0, 2*pi).
struct HypersphericalPoint {
  double r = 0.0;
  std::vector<double> theta;  // length N-1
};

// Throws std::domain_error at the origin.  Angles returned in canonical ranges.
HypersphericalPoint to_hyperspherical(const std::vector<double>& q);

// Throws std::domain_error on r <= 0 or out-of-range angles.
std::vector<double> from_hyperspherical(const HypersphericalPoint& h);

}  // namespace taubnut
