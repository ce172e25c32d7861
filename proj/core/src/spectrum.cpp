#include "taubnut/spectrum.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace taubnut {

namespace {

void check_quantum_numbers(int n, int l) {
  if (n < 0 || l < 0)
    throw std::domain_error("quantum numbers must satisfy n >= 0, l >= 0");
}

// hbar^2 Ntilde^2 and the shared discriminant sqrt(a^2 + 2 eta k a).
double a_term(int n, int l, const ModelParams& par) {
  const double nt = nu_tilde(n, l, par);
  return par.hbar * par.hbar * nt * nt;
}

}  // namespace

double nu_tilde(int n, int l, const ModelParams& par) {
  check_quantum_numbers(n, l);
  // Integer sum first: equal n+l must give bit-identical inputs downstream.
  return static_cast<double>(n + l) + 0.5 * static_cast<double>(par.dim - 1);
}

double bound_energy(int n, int l, const ModelParams& par) {
  if (!(par.k > 0.0))
    throw std::domain_error("bound_energy: bound spectrum requires k > 0");
  const double a = a_term(n, l, par);
  const double ek = par.eta * par.k;
  return -par.k * par.k / (a + ek + std::sqrt(a * (a + 2.0 * ek)));
}

double bound_energy_displayed(int n, int l, const ModelParams& par) {
  if (!(par.eta > 0.0))
    throw std::domain_error("bound_energy_displayed: requires eta > 0");
  const double a = a_term(n, l, par);
  const double ek = par.eta * par.k;
  return (-a - ek + std::sqrt(a * (a + 2.0 * ek))) / (par.eta * par.eta);
}

double bound_energy_minus_branch(int n, int l, const ModelParams& par) {
  if (!(par.eta > 0.0))
    throw std::domain_error("bound_energy_minus_branch: requires eta > 0");
  const double a = a_term(n, l, par);
  const double ek = par.eta * par.k;
  return (-a - ek - std::sqrt(a * (a + 2.0 * ek))) / (par.eta * par.eta);
}

double energy_coupling(double energy, const ModelParams& par) {
  return par.k + par.eta * energy;
}

QuantumLevel make_level(int n, int l, const ModelParams& par) {
  QuantumLevel lvl;
  lvl.n = n;
  lvl.l = l;
  lvl.energy = bound_energy(n, l, par);
  lvl.coupling = energy_coupling(lvl.energy, par);
  lvl.principal = n + l;
  if (!(lvl.energy < 0.0) || !(lvl.coupling > 0.0))
    throw std::domain_error("make_level: level not admissible (needs E < 0, K > 0)");
  return lvl;
}

double laguerre(int n, double alpha, double x) {
  if (n < 0)
    throw std::domain_error("laguerre: n must be >= 0");
  if (!(alpha > -1.0))
    throw std::domain_error("laguerre: alpha must be > -1");
  if (n == 0) return 1.0;
  double lm1 = 1.0;                 // L_0
  double lm0 = 1.0 + alpha - x;     // L_1
  for (int m = 1; m < n; ++m) {
    const double next =
        ((2.0 * m + 1.0 + alpha - x) * lm0 - (m + alpha) * lm1) / (m + 1.0);
    lm1 = lm0;
    lm0 = next;
  }
  return lm0;
}

double angular_eigenvalue(int l, const ModelParams& par) {
  if (l < 0)
    throw std::domain_error("angular_eigenvalue: l must be >= 0");
  return par.hbar * par.hbar * static_cast<double>(l) *
         static_cast<double>(l + par.dim - 2);
}

namespace {

// Exact binomial via alternating multiply/divide (integral at every step).
std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return c;
}

}  // namespace

std::uint64_t level_multiplicity(int l, const ModelParams& par) {
  if (l < 0)
    throw std::domain_error("level_multiplicity: l must be >= 0");
  const int n = par.dim;
  return binomial(n + l - 1, l) - binomial(n + l - 3, l - 2);
}

std::uint64_t degeneracy(int principal, const ModelParams& par) {
  if (principal < 0)
    throw std::domain_error("degeneracy: principal must be >= 0");
  std::uint64_t total = 0;
  for (int l = 0; l <= principal; ++l) total += level_multiplicity(l, par);
  return total;
}

double perturbative_energy(int n, int l, const ModelParams& par) {
  const double nt = nu_tilde(n, l, par);
  const double h2n2 = par.hbar * par.hbar * nt * nt;
  return -par.k * par.k / (2.0 * h2n2) +
         par.eta * par.k * par.k * par.k / (2.0 * h2n2 * h2n2);
}

RadialWavefunction::RadialWavefunction(const QuantumLevel& level,
                                       const ModelParams& par, double normalization)
    : level_(level), params_(par), normalization_(normalization) {
  beta_ = level.coupling / (par.hbar * par.hbar * nu_tilde(level.n, level.l, par));
}

double RadialWavefunction::unnormalized(double r) const {
  if (!(r >= 0.0))
    throw std::domain_error("RadialWavefunction: r must be >= 0");
  const double x = 2.0 * beta_ * r;
  const double alpha = 2.0 * level_.l + params_.dim - 2;
  return std::pow(r, level_.l) * std::exp(-beta_ * r) *
         laguerre(level_.n, alpha, x);
}

double RadialWavefunction::operator()(double r) const {
  return normalization_ * unnormalized(r);
}

namespace {

// Truncation radius where the integrand envelope r^P e^{-rate r} has fallen
// below 1e-18 of its peak.
double truncation_radius(double power, double rate) {
  const double peak_r = power > 0.0 ? power / rate : 0.0;
  auto log_env = [&](double r) {
    return power * std::log(r) - rate * r;
  };
  const double log_peak = peak_r > 0.0 ? log_env(peak_r) : 0.0;
  double r = std::max(1.0, 2.0 * peak_r);
  const double drop = std::log(1e-18);
  while (log_env(r) - log_peak > drop) r *= 2.0;
  return r;
}

double weighted_overlap_integral(const RadialWavefunction& a,
                                 const RadialWavefunction& b) {
  const ModelParams& par = a.params();
  const double rate = a.decay_rate() + b.decay_rate();
  const double power = a.level().l + b.level().l + a.level().n + b.level().n +
                       par.dim - 1;
  const double r_max = truncation_radius(power, rate);

  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0, l1 = 0.0;
  const double value = integrator.integrate(
      [&](double r) {
        if (r <= 0.0) return 0.0;
        return a.unnormalized(r) * b.unnormalized(r) * (1.0 + par.eta / r) *
               std::pow(r, par.dim - 1);
      },
      0.0, r_max, 1e-12, &error, &l1);
  if (!(error <= 1e-8 * std::max(l1, 1e-300)))
    throw std::runtime_error("inner_product: quadrature did not converge");
  return value;
}

}  // namespace

RadialWavefunction eigenfunction(const QuantumLevel& level, const ModelParams& par) {
  if (!(level.energy < 0.0) || !(level.coupling > 0.0))
    throw std::domain_error("eigenfunction: level not admissible");
  RadialWavefunction raw(level, par, 1.0);
  const double norm2 = weighted_overlap_integral(raw, raw);
  if (!(norm2 > 0.0) || !std::isfinite(norm2))
    throw std::runtime_error("eigenfunction: normalization integral failed");
  return RadialWavefunction(level, par, 1.0 / std::sqrt(norm2));
}

double inner_product(const RadialWavefunction& a, const RadialWavefunction& b) {
  if (a.level().l != b.level().l)
    throw std::invalid_argument("inner_product: radial sectors differ (l mismatch)");
  if (!(a.params() == b.params()))
    throw std::invalid_argument("inner_product: model parameters differ");
  return a.normalization() * b.normalization() * weighted_overlap_integral(a, b);
}

int count_radial_nodes(const RadialWavefunction& psi) {
  const int n = psi.level().n;
  const double alpha = 2.0 * psi.level().l + psi.params().dim - 2;
  // All Laguerre zeros satisfy x < 4n + 2 alpha + 2; scan slightly beyond.
  const double x_max = 4.0 * n + 2.0 * alpha + 2.0;
  const double r_max = 1.05 * x_max / (2.0 * psi.decay_rate()) + 1.0;
  const int samples = 2000 * (n + 1);
  int sign_changes = 0;
  int prev_sign = 0;
  for (int i = 1; i <= samples; ++i) {
    const double r = r_max * static_cast<double>(i) / samples;
    const double v = psi.unnormalized(r);
    const int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (prev_sign != 0 && sign != prev_sign) ++sign_changes;
    prev_sign = sign;
  }
  return sign_changes;
}

}  // namespace taubnut
