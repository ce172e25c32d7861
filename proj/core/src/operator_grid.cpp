#include "taubnut/operator_grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace taubnut {

namespace {

using cplx = std::complex<double>;

bool same_spec(const GridSpec& a, const GridSpec& b) {
  return a.dim == b.dim && a.lo == b.lo && a.n == b.n && a.h == b.h;
}

void check_same(const GridField& a, const GridField& b) {
  if (!same_spec(a.spec, b.spec))
    throw std::invalid_argument("GridField: mismatched grids");
}

double radius_at(const GridSpec& spec, int i, int j, int k) {
  const double x = spec.coordinate(0, i);
  const double y = spec.coordinate(1, j);
  const double z = spec.dim == 3 ? spec.coordinate(2, k) : 0.0;
  return std::sqrt(x * x + y * y + z * z);
}

GridField like(const GridField& f, int margin) {
  GridField out{f.spec, margin, {}};
  out.values.assign(f.values.size(), cplx(0.0, 0.0));
  return out;
}

// 4th-order central derivative along `axis`; invalidates two more layers.
GridField derivative(const GridField& f, int axis, int order) {
  const GridSpec& g = f.spec;
  if (axis < 0 || axis >= g.dim)
    throw std::invalid_argument("derivative: axis out of range");
  GridField out = like(f, f.margin + 2);
  const std::array<std::size_t, 3> stride = {
      1, static_cast<std::size_t>(g.n[0]),
      static_cast<std::size_t>(g.n[0]) * g.n[1]};
  const std::size_t s = stride[axis];
  const double inv12h = 1.0 / (12.0 * g.h);
  const double inv12h2 = 1.0 / (12.0 * g.h * g.h);
  const int kmax = g.dim == 3 ? g.n[2] : 1;
  for (int k = 0; k < kmax; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const int a = axis == 0 ? i : (axis == 1 ? j : k);
        if (a < 2 || a >= g.n[axis] - 2) continue;
        const std::size_t c = g.index(i, j, k);
        const cplx m2 = f.values[c - 2 * s], m1 = f.values[c - s];
        const cplx p1 = f.values[c + s], p2 = f.values[c + 2 * s];
        if (order == 1)
          out.values[c] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) * inv12h;
        else
          out.values[c] =
              (-m2 + 16.0 * m1 - 30.0 * f.values[c] + 16.0 * p1 - p2) * inv12h2;
      }
  return out;
}

// Pointwise map value -> g(q, value); margin unchanged.
template <typename Fn>
GridField pointwise(const GridField& f, Fn&& fn) {
  GridField out = like(f, f.margin);
  const GridSpec& g = f.spec;
  const int kmax = g.dim == 3 ? g.n[2] : 1;
  for (int k = 0; k < kmax; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const std::size_t c = g.index(i, j, k);
        out.values[c] = fn(i, j, k, f.values[c]);
      }
  return out;
}

double axis_coord(const GridSpec& g, int axis, int i, int j, int k) {
  return g.coordinate(axis, axis == 0 ? i : (axis == 1 ? j : k));
}

}  // namespace

GridSpec::GridSpec(int dim_, std::array<double, 3> lo_, std::array<int, 3> n_,
                   double h_)
    : dim(dim_), lo(lo_), n(n_), h(h_) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("GridSpec: dim must be 2 or 3");
  if (!(h > 0.0))
    throw std::invalid_argument("GridSpec: h must be > 0");
  if (dim == 2) n[2] = 1;
  for (int a = 0; a < dim; ++a)
    if (n[a] < 16)
      throw std::invalid_argument("GridSpec: need >= 16 nodes per active axis");
  // The closed box must exclude the origin (metric singularity): the nearest
  // box point to the origin is the per-axis clamp of 0 into [lo, hi].
  double dist2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double hi = lo[a] + (n[a] - 1) * h;
    const double nearest = std::clamp(0.0, lo[a], hi);
    dist2 += nearest * nearest;
  }
  if (!(dist2 > 0.0))
    throw std::invalid_argument("GridSpec: box must exclude the origin");
}

std::size_t GridSpec::size() const {
  return static_cast<std::size_t>(n[0]) * n[1] * (dim == 3 ? n[2] : 1);
}

std::size_t GridSpec::index(int i, int j, int k) const {
  return (static_cast<std::size_t>(k) * n[1] + j) * n[0] + i;
}

GridSpec default_grid(int dim, int points) {
  if (dim == 2) {
    const double h = 2.4 / (points - 1);
    return GridSpec(2, {0.8, -0.4, 0.0}, {points, points, 1}, h);
  }
  if (dim == 3) {
    const double h = 2.0 / (points - 1);
    return GridSpec(3, {0.9, -1.0, -1.0}, {points, points, points}, h);
  }
  throw std::invalid_argument("default_grid: dim must be 2 or 3");
}

GridField make_field(
    const GridSpec& spec,
    const std::function<std::complex<double>(double, double, double)>& f) {
  GridField out{spec, 0, {}};
  out.values.resize(spec.size());
  const int kmax = spec.dim == 3 ? spec.n[2] : 1;
  for (int k = 0; k < kmax; ++k)
    for (int j = 0; j < spec.n[1]; ++j)
      for (int i = 0; i < spec.n[0]; ++i)
        out.values[spec.index(i, j, k)] =
            f(spec.coordinate(0, i), spec.coordinate(1, j),
              spec.dim == 3 ? spec.coordinate(2, k) : 0.0);
  return out;
}

GridField random_test_field(const GridSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  double side = spec.side(0);
  for (int a = 1; a < spec.dim; ++a) side = std::min(side, spec.side(a));
  // Bumps must decay hard near every face: centers jitter by 0.1*side around
  // the box center and 8.8 sigma fits in the remainder.  Depends only on the
  // box (not on h) so one seed describes the same continuum function at every
  // resolution, which order-of-convergence measurements rely on.
  const double sigma_max = 0.4 * side / 8.8;

  struct Bump {
    std::array<double, 3> c{};
    double sigma = 0.0;
    std::array<cplx, 5> coef{};
  };
  std::vector<Bump> bumps(3);
  for (Bump& b : bumps) {
    for (int a = 0; a < spec.dim; ++a) {
      const double mid = spec.lo[a] + 0.5 * spec.side(a);
      b.c[a] = mid + 0.1 * side * (2.0 * unit() - 1.0);
    }
    b.sigma = sigma_max * (0.7 + 0.3 * unit());
    for (cplx& c : b.coef)
      c = cplx(2.0 * unit() - 1.0, 2.0 * unit() - 1.0);
  }

  return make_field(spec, [&bumps, &spec](double x, double y, double z) {
    cplx v(0.0, 0.0);
    for (const Bump& b : bumps) {
      const double dx = (x - b.c[0]) / b.sigma;
      const double dy = (y - b.c[1]) / b.sigma;
      const double dz = spec.dim == 3 ? (z - b.c[2]) / b.sigma : 0.0;
      const double d2 = dx * dx + dy * dy + dz * dz;
      const cplx poly = b.coef[0] + b.coef[1] * dx + b.coef[2] * dy +
                        b.coef[3] * dz + b.coef[4] * (dx * dy);
      v += poly * std::exp(-0.5 * d2);
    }
    return v;
  });
}

GridField operator+(const GridField& a, const GridField& b) {
  check_same(a, b);
  GridField out = like(a, std::max(a.margin, b.margin));
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = a.values[i] + b.values[i];
  return out;
}

GridField operator-(const GridField& a, const GridField& b) {
  check_same(a, b);
  GridField out = like(a, std::max(a.margin, b.margin));
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = a.values[i] - b.values[i];
  return out;
}

GridField operator*(std::complex<double> c, const GridField& f) {
  GridField out = like(f, f.margin);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = c * f.values[i];
  return out;
}

GridField apply_hamiltonian(const GridField& f, const ModelParams& par) {
  GridField lap = derivative(f, 0, 2) + derivative(f, 1, 2);
  if (f.spec.dim == 3) lap = lap + derivative(f, 2, 2);
  const double h2 = par.hbar * par.hbar;
  GridField out = like(f, lap.margin);
  const GridSpec& g = f.spec;
  const int kmax = g.dim == 3 ? g.n[2] : 1;
  for (int k = 0; k < kmax; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        const std::size_t c = g.index(i, j, k);
        const double r = radius_at(g, i, j, k);
        out.values[c] = r / (2.0 * (par.eta + r)) *
                        (-h2 * lap.values[c] - 2.0 * par.k / r * f.values[c]);
      }
  return out;
}

GridField apply_momentum(const GridField& f, int axis, const ModelParams& par) {
  GridField d = derivative(f, axis, 1);
  return cplx(0.0, -par.hbar) * d;
}

GridField apply_angular(const GridField& f, int i, int j, const ModelParams& par) {
  if (i < 0 || j < 0 || i >= f.spec.dim || j >= f.spec.dim)
    throw std::invalid_argument("apply_angular: index out of range");
  GridField di = derivative(f, i, 1);
  GridField dj = derivative(f, j, 1);
  GridField out = like(f, di.margin);
  const GridSpec& g = f.spec;
  const int kmax = g.dim == 3 ? g.n[2] : 1;
  const cplx mih(0.0, -par.hbar);
  for (int kk = 0; kk < kmax; ++kk)
    for (int jj = 0; jj < g.n[1]; ++jj)
      for (int ii = 0; ii < g.n[0]; ++ii) {
        const std::size_t c = g.index(ii, jj, kk);
        const double qi = axis_coord(g, i, ii, jj, kk);
        const double qj = axis_coord(g, j, ii, jj, kk);
        out.values[c] = mih * (qi * dj.values[c] - qj * di.values[c]);
      }
  return out;
}

GridField apply_casimir(const GridField& f, int m, const ModelParams& par) {
  if (m < 2 || m > f.spec.dim)
    throw std::invalid_argument("apply_casimir: block size out of range");
  GridField out = like(f, f.margin + 4);
  bool first = true;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      GridField term = apply_angular(apply_angular(f, i, j, par), i, j, par);
      out = first ? term : out + term;
      first = false;
    }
  return out;
}

GridField apply_runge_lenz(const GridField& f, int i, const ModelParams& par) {
  if (i < 0 || i >= f.spec.dim)
    throw std::invalid_argument("apply_runge_lenz: index out of range");
  const GridSpec& g = f.spec;

  GridField acc = like(f, f.margin + 4);
  for (int j = 0; j < g.dim; ++j) {
    if (j == i) continue;
    // (1/2)[p_j (J_ji f) + J_ji (p_j f)], J_ji = q_j p_i - q_i p_j.
    GridField t1 = apply_momentum(apply_angular(f, j, i, par), j, par);
    GridField t2 = apply_angular(apply_momentum(f, j, par), j, i, par);
    acc = acc + (cplx(0.5, 0.0) * (t1 + t2));
  }

  GridField hf = apply_hamiltonian(f, par);
  GridField tail = like(f, hf.margin);
  const int kmax = g.dim == 3 ? g.n[2] : 1;
  for (int kk = 0; kk < kmax; ++kk)
    for (int jj = 0; jj < g.n[1]; ++jj)
      for (int ii = 0; ii < g.n[0]; ++ii) {
        const std::size_t c = g.index(ii, jj, kk);
        const double qi = axis_coord(g, i, ii, jj, kk);
        const double r = radius_at(g, ii, jj, kk);
        tail.values[c] =
            qi / r * (par.eta * hf.values[c] + par.k * f.values[c]);
      }
  return acc + tail;
}

namespace {

int effective_margin(const GridField& f, int margin) {
  return margin >= 0 ? margin : f.margin;
}

template <typename Fn>
void for_interior(const GridSpec& g, int margin, Fn&& fn) {
  const int kmax = g.dim == 3 ? g.n[2] : 1;
  const int klo = g.dim == 3 ? margin : 0;
  const int khi = g.dim == 3 ? kmax - margin : 1;
  for (int k = klo; k < khi; ++k)
    for (int j = margin; j < g.n[1] - margin; ++j)
      for (int i = margin; i < g.n[0] - margin; ++i) fn(i, j, k);
}

}  // namespace

double weighted_norm(const GridField& f, const ModelParams& par, int margin) {
  const int m = effective_margin(f, margin);
  double sum = 0.0;
  for_interior(f.spec, m, [&](int i, int j, int k) {
    const std::size_t c = f.spec.index(i, j, k);
    const double r = radius_at(f.spec, i, j, k);
    sum += std::norm(f.values[c]) * (1.0 + par.eta / r);
  });
  return std::sqrt(sum * std::pow(f.spec.h, f.spec.dim));
}

std::complex<double> weighted_inner_product(const GridField& a, const GridField& b,
                                            const ModelParams& par, int margin) {
  check_same(a, b);
  const int m = margin >= 0 ? margin : std::max(a.margin, b.margin);
  cplx sum(0.0, 0.0);
  for_interior(a.spec, m, [&](int i, int j, int k) {
    const std::size_t c = a.spec.index(i, j, k);
    const double r = radius_at(a.spec, i, j, k);
    sum += std::conj(a.values[c]) * b.values[c] * (1.0 + par.eta / r);
  });
  return sum * std::pow(a.spec.h, a.spec.dim);
}

double commutator_residual(const GridOperator& a, const GridOperator& b,
                           const GridField& f, const ModelParams& par) {
  GridField ab = a(b(f));
  GridField ba = b(a(f));
  GridField diff = ab - ba;
  const double den = weighted_norm(f, par, diff.margin);
  if (!(den > 0.0))
    throw std::invalid_argument("commutator_residual: field vanishes on interior");
  return weighted_norm(diff, par, diff.margin) / den;
}

double hamiltonian_self_adjointness_residual(const GridField& phi,
                                             const GridField& psi,
                                             const ModelParams& par) {
  GridField hpsi = apply_hamiltonian(psi, par);
  GridField hphi = apply_hamiltonian(phi, par);
  const int m = std::max(hpsi.margin, hphi.margin);
  const cplx lhs = weighted_inner_product(phi, hpsi, par, m);
  const cplx rhs = weighted_inner_product(hphi, psi, par, m);
  const double den = weighted_norm(phi, par, m) * weighted_norm(psi, par, m);
  if (!(den > 0.0))
    throw std::invalid_argument(
        "hamiltonian_self_adjointness_residual: vanishing fields");
  return std::abs(lhs - rhs) / den;
}

double quantum_runge_lenz_identity_residual(const GridField& f,
                                            const ModelParams& par) {
  const int n = f.spec.dim;
  GridField sum_r2 = like(f, f.margin + 8);
  for (int i = 0; i < n; ++i) {
    GridField ri = apply_runge_lenz(apply_runge_lenz(f, i, par), i, par);
    sum_r2 = i == 0 ? ri : sum_r2 + ri;
  }
  GridField hf = apply_hamiltonian(f, par);
  GridField hcf = apply_hamiltonian(apply_casimir(f, n, par), par);
  const double l_shift =
      par.hbar * par.hbar * (n - 1.0) * (n - 1.0) / 4.0;
  // (eta H + k)^2 f composed as (eta H + k)(eta H f + k f).
  GridField g1 = cplx(par.eta, 0.0) * hf + cplx(par.k, 0.0) * f;
  GridField sq = cplx(par.eta, 0.0) * apply_hamiltonian(g1, par) +
                 cplx(par.k, 0.0) * g1;
  GridField resid = sum_r2 - (cplx(2.0, 0.0) * hcf) -
                    (cplx(2.0 * l_shift, 0.0) * hf) - sq;
  const double den = weighted_norm(f, par, resid.margin);
  if (!(den > 0.0))
    throw std::invalid_argument(
        "quantum_runge_lenz_identity_residual: field vanishes on interior");
  return weighted_norm(resid, par, resid.margin) / den;
}

}  // namespace taubnut
