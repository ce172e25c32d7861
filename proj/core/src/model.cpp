#include "taubnut/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace taubnut {

ModelParams::ModelParams(double eta_, double k_, double hbar_, int dim_)
    : eta(eta_), k(k_), hbar(hbar_), dim(dim_) {
  if (!std::isfinite(eta) || eta < 0.0)
    throw std::invalid_argument("ModelParams: eta must be finite and >= 0");
  if (!std::isfinite(k))
    throw std::invalid_argument("ModelParams: k must be finite");
  if (!std::isfinite(hbar) || hbar <= 0.0)
    throw std::invalid_argument("ModelParams: hbar must be finite and > 0");
  if (dim < 2)
    throw std::invalid_argument("ModelParams: dim must be >= 2");
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  return a.eta == b.eta && a.k == b.k && a.hbar == b.hbar && a.dim == b.dim;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

double radial_coordinate(const PhaseState& state) {
  if (state.q.size() != state.p.size() || state.q.size() < 2)
    throw std::domain_error("PhaseState: q and p must have equal length >= 2");
  const double r = norm(state.q);
  if (r == 0.0)
    throw std::domain_error("PhaseState: |q| = 0 hits the metric singularity");
  return r;
}

double hamiltonian(const PhaseState& state, const ModelParams& par) {
  const double r = radial_coordinate(state);
  const double p2 = dot(state.p, state.p);
  return r * p2 / (2.0 * (par.eta + r)) - par.k / (par.eta + r);
}

double metric_factor(double r, const ModelParams& par) {
  if (!(r > 0.0))
    throw std::domain_error("metric_factor: r must be > 0");
  return 1.0 + par.eta / r;
}

double conformal_factor(double r, const ModelParams& par) {
  return std::sqrt(metric_factor(r, par));
}

double scalar_curvature(double r, double eta, int dim) {
  if (!(r > 0.0))
    throw std::domain_error("scalar_curvature: r must be > 0");
  const double n = static_cast<double>(dim);
  const double s = eta + r;
  return eta * (n - 1.0) * (4.0 * (n - 3.0) * r + 3.0 * (n - 2.0) * eta) /
         (4.0 * r * s * s * s);
}

double scalar_curvature(double r, const ModelParams& par) {
  return scalar_curvature(r, par.eta, par.dim);
}

double green_radial(double r, const ModelParams& par) {
  if (!(r > 0.0))
    throw std::domain_error("green_radial: r must be > 0");
  if (par.eta == 0.0) return -1.0 / r;
  return -(2.0 / par.eta) * std::sqrt(1.0 + par.eta / r);
}

double green_radial_derivative(double r, const ModelParams& par) {
  if (!(r > 0.0))
    throw std::domain_error("green_radial_derivative: r must be > 0");
  return 1.0 / (r * r * std::sqrt(1.0 + par.eta / r));
}

IntrinsicPotentials intrinsic_potentials(double r, const ModelParams& par,
                                         const IntrinsicConstants& c) {
  if (!(r > 0.0))
    throw std::domain_error("intrinsic_potentials: r must be > 0");
  IntrinsicPotentials out;
  out.kepler_coulomb = c.A * std::sqrt(1.0 + par.eta / r) + c.B;
  out.oscillator = c.C * r / (r + par.eta) + c.D;
  return out;
}

IntrinsicConstants deformed_coulomb_constants(const ModelParams& par) {
  if (par.eta == 0.0)
    throw std::domain_error(
        "deformed_coulomb_constants: identification C = k/eta undefined at eta = 0");
  IntrinsicConstants c;
  c.C = par.k / par.eta;
  c.D = -c.C;
  return c;
}

HypersphericalPoint to_hyperspherical(const std::vector<double>& q) {
  const std::size_t n = q.size();
  if (n < 2)
    throw std::domain_error("to_hyperspherical: need dimension >= 2");
  HypersphericalPoint h;
  h.r = norm(q);
  if (h.r == 0.0)
    throw std::domain_error("to_hyperspherical: origin has undefined angles");
  h.theta.resize(n - 1);
  // tail[j] = sqrt(q_j^2 + ... + q_{N-1}^2), accumulated backwards for stability.
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;)
    tail[j] = std::hypot(q[j], tail[j + 1]);
  for (std::size_t j = 0; j + 2 < n; ++j)
    h.theta[j] = std::atan2(tail[j + 1], q[j]);  // in [0, pi]
  double az = std::atan2(q[n - 1], q[n - 2]);
  if (az < 0.0) az += 2.0 * std::numbers::pi;  // wrap into [0, 2*pi)
  h.theta[n - 2] = az;
  return h;
}

std::vector<double> from_hyperspherical(const HypersphericalPoint& h) {
  const std::size_t n = h.theta.size() + 1;
  if (n < 2)
    throw std::domain_error("from_hyperspherical: need dimension >= 2");
  if (!(h.r > 0.0))
    throw std::domain_error("from_hyperspherical: r must be > 0");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t j = 0; j + 2 < n; ++j)
    if (!(h.theta[j] >= 0.0 && h.theta[j] <= std::numbers::pi))
      throw std::domain_error("from_hyperspherical: theta_" + std::to_string(j + 1) +
                              " outside [0, pi]");
  if (!(h.theta[n - 2] >= 0.0 && h.theta[n - 2] < two_pi))
    throw std::domain_error("from_hyperspherical: azimuthal angle outside [0, 2*pi)");

  std::vector<double> q(n);
  double s = 1.0;  // running product of sines
  for (std::size_t j = 0; j + 1 < n; ++j) {
    q[j] = h.r * s * std::cos(h.theta[j]);
    s *= std::sin(h.theta[j]);
  }
  q[n - 1] = h.r * s;
  return q;
}

}  // namespace taubnut
