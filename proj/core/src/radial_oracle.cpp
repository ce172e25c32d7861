#include "taubnut/radial_oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "taubnut/dynamics.hpp"
#include "taubnut/spectrum.hpp"

namespace taubnut {

RadialGrid::RadialGrid(double r_min_, double r_max_, int points_)
    : r_min(r_min_), r_max(r_max_), points(points_) {
  if (!(r_min > 0.0) || !(r_max > r_min) || points < 100)
    throw std::invalid_argument(
        "RadialGrid: need 0 < r_min < r_max and points >= 100");
}

double reduced_centrifugal_coefficient(int l, const ModelParams& par) {
  if (l < 0)
    throw std::invalid_argument("reduced_centrifugal_coefficient: l must be >= 0");
  const double n = static_cast<double>(par.dim);
  return static_cast<double>(l) * (l + n - 2.0) + (n - 1.0) * (n - 3.0) / 4.0;
}

DiscretizedRadialProblem discretize(int l, const ModelParams& par,
                                    const RadialGrid& grid) {
  const double h = grid.h();
  const double h2 = par.hbar * par.hbar;
  const double cl = reduced_centrifugal_coefficient(l, par);
  const int m = grid.points - 2;  // interior nodes

  DiscretizedRadialProblem prob{{}, {}, {}, grid, l, par};
  prob.diag.resize(m);
  prob.off.assign(m - 1, -0.5 * h2 / (h * h));
  prob.weight.resize(m);
  for (int i = 0; i < m; ++i) {
    const double r = grid.r(i + 1);
    prob.diag[i] = h2 / (h * h) + 0.5 * h2 * cl / (r * r) - par.k / r;
    prob.weight[i] = 1.0 + par.eta / r;
  }
  return prob;
}

std::vector<RadialEigenpair> lowest_eigenpairs(const DiscretizedRadialProblem& prob,
                                               int count) {
  const int m = static_cast<int>(prob.diag.size());
  if (count < 1 || count >= m)
    throw std::invalid_argument("lowest_eigenpairs: need 1 <= count < interior size");

  // Symmetric reduction of A u = E B u with diagonal positive B:
  // (B^-1/2 A B^-1/2) v = E v, v = B^1/2 u; stays tridiagonal.
  std::vector<double> d(m), e(m - 1);
  for (int i = 0; i < m; ++i) d[i] = prob.diag[i] / prob.weight[i];
  for (int i = 0; i + 1 < m; ++i)
    e[i] = prob.off[i] / std::sqrt(prob.weight[i] * prob.weight[i + 1]);

  std::vector<double> w(m);
  std::vector<lapack_int> iblock(m), isplit(m);
  lapack_int found = 0, nsplit = 0;
  lapack_int info = LAPACKE_dstebz('I', 'E', m, 0.0, 0.0, 1, count, 0.0, d.data(),
                                   e.data(), &found, &nsplit, w.data(),
                                   iblock.data(), isplit.data());
  if (info != 0 || found != count)
    throw std::runtime_error("lowest_eigenpairs: bisection failed (dstebz info=" +
                             std::to_string(info) + ", found=" +
                             std::to_string(found) + ")");

  std::vector<double> z(static_cast<std::size_t>(m) * count);
  std::vector<lapack_int> ifail(count);
  info = LAPACKE_dstein(LAPACK_COL_MAJOR, m, d.data(), e.data(), count, w.data(),
                        iblock.data(), isplit.data(), z.data(), m, ifail.data());
  if (info != 0)
    throw std::runtime_error(
        "lowest_eigenpairs: inverse iteration failed (dstein info=" +
        std::to_string(info) + ")");

  std::vector<RadialEigenpair> out(count);
  for (int j = 0; j < count; ++j) {
    out[j].energy = w[j];
    out[j].u.resize(m);
    const double* v = z.data() + static_cast<std::size_t>(j) * m;
    // u = B^-1/2 v; ||v|| = 1 from dstein, so u^T B u = 1 automatically.
    double vmax = 0.0;
    for (int i = 0; i < m; ++i) vmax = std::max(vmax, std::abs(v[i]));
    double lead = 0.0;
    for (int i = 0; i < m; ++i)
      if (std::abs(v[i]) > 1e-3 * vmax) {
        lead = v[i];
        break;
      }
    const double sign = lead < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < m; ++i)
      out[j].u[i] = sign * v[i] / std::sqrt(prob.weight[i]);
  }
  std::sort(out.begin(), out.end(),
            [](const RadialEigenpair& a, const RadialEigenpair& b) {
              return a.energy < b.energy;
            });
  return out;
}

double residual_norm(const std::vector<double>& psi, double energy, int l,
                     const ModelParams& par, const RadialGrid& grid) {
  if (static_cast<int>(psi.size()) != grid.points)
    throw std::invalid_argument("residual_norm: psi must be sampled on the full grid");
  const double h = grid.h();
  const double h2 = par.hbar * par.hbar;
  const double ll = static_cast<double>(l) * (l + par.dim - 2.0);

  double num = 0.0, den = 0.0;
  for (int i = 1; i + 1 < grid.points; ++i) {
    const double r = grid.r(i);
    const double d2 = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) / (h * h);
    const double d1 = (psi[i + 1] - psi[i - 1]) / (2.0 * h);
    const double op = r / (2.0 * (par.eta + r)) *
                      (-h2 * d2 - h2 * (par.dim - 1) / r * d1 +
                       h2 * ll / (r * r) * psi[i] - 2.0 * par.k / r * psi[i]);
    const double res = op - energy * psi[i];
    const double meas = (1.0 + par.eta / r) * std::pow(r, par.dim - 1) * h;
    num += res * res * meas;
    den += psi[i] * psi[i] * meas;
  }
  if (!(den > 0.0))
    throw std::invalid_argument("residual_norm: psi vanishes on the grid");
  return std::sqrt(num / den);
}

RadialGrid default_level_grid(int n, int l, const ModelParams& par, int points) {
  const QuantumLevel lvl = make_level(n, l, par);
  // Outer classical turning point of the reduced problem at the level energy:
  // outermost root of E r^2 + (E eta + k) r - c_l hbar^2/2 = 0.
  const double cl = std::max(0.0, reduced_centrifugal_coefficient(l, par));
  const EffectiveProblem prob{cl * par.hbar * par.hbar, par};
  const std::vector<double> tp = turning_points(lvl.energy, prob);
  const double r_turn = tp.empty() ? -par.k / lvl.energy : tp.back();
  // The inner Dirichlet node shifts eigenvalues by ~(hbar^2/2)|u'(0)|^2 r_min
  // when u ~ r (l = 0), so r_min must sit far below the target tolerances.
  const double r_min = 1e-9 * par.hbar * par.hbar / lvl.coupling;
  return RadialGrid(r_min, 8.0 * r_turn, points);
}

}  // namespace taubnut
