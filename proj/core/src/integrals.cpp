#include "taubnut/integrals.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace taubnut {

namespace {

int state_dim(const PhaseState& state) {
  if (state.q.size() != state.p.size() || state.q.size() < 2)
    throw std::invalid_argument("PhaseState: q and p must have equal length >= 2");
  return static_cast<int>(state.q.size());
}

void check_block(int m, int n) {
  if (m < 2 || m > n)
    throw std::invalid_argument("angular_casimirs: block size m must be in [2, N]");
}

}  // namespace

double angular_momentum(const PhaseState& state, int i, int j) {
  const int n = state_dim(state);
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("angular_momentum: index out of range");
  return state.q[i] * state.p[j] - state.q[j] * state.p[i];
}

std::pair<double, double> angular_casimirs(const PhaseState& state, int m) {
  const int n = state_dim(state);
  check_block(m, n);
  double upper = 0.0, lower = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double jij = angular_momentum(state, i, j);
      upper += jij * jij;
    }
  for (int i = n - m; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double jij = angular_momentum(state, i, j);
      lower += jij * jij;
    }
  return {upper, lower};
}

double total_angular_momentum_sq(const PhaseState& state) {
  return angular_casimirs(state, state_dim(state)).first;
}

std::vector<double> runge_lenz(const PhaseState& state, const ModelParams& par) {
  const int n = state_dim(state);
  const double r = radial_coordinate(state);
  const double h = hamiltonian(state, par);
  const double qp = dot(state.q, state.p);
  const double p2 = dot(state.p, state.p);
  std::vector<double> rl(n);
  // sum_j p_j (q_j p_i - q_i p_j) = p_i (q.p) - q_i p^2.
  for (int i = 0; i < n; ++i)
    rl[i] = state.p[i] * qp - state.q[i] * p2 +
            (state.q[i] / r) * (par.eta * h + par.k);
  return rl;
}

double runge_lenz_identity_residual(const PhaseState& state, const ModelParams& par) {
  const std::vector<double> rl = runge_lenz(state, par);
  const double r2 = dot(rl, rl);
  const double h = hamiltonian(state, par);
  const double l2 = total_angular_momentum_sq(state);
  const double kk = par.eta * h + par.k;
  const double rhs1 = 2.0 * l2 * h;
  const double rhs2 = kk * kk;
  const double scale = std::max({std::abs(r2), std::abs(rhs1), rhs2, 1e-300});
  return std::abs(r2 - rhs1 - rhs2) / scale;
}

IntegralSet evaluate_integrals(const PhaseState& state, const ModelParams& par) {
  const int n = state_dim(state);
  IntegralSet set;
  set.casimirs_upper.reserve(n - 1);
  set.casimirs_lower.reserve(n - 1);
  for (int m = 2; m <= n; ++m) {
    const auto [up, lo] = angular_casimirs(state, m);
    set.casimirs_upper.push_back(up);
    set.casimirs_lower.push_back(lo);
  }
  set.runge_lenz = runge_lenz(state, par);
  set.energy = hamiltonian(state, par);
  return set;
}

Observable hamiltonian_observable(const ModelParams& par) {
  return [par](const PhaseState& s) { return hamiltonian(s, par); };
}

Observable angular_momentum_observable(int i, int j) {
  return [i, j](const PhaseState& s) { return angular_momentum(s, i, j); };
}

Observable casimir_upper_observable(int m) {
  return [m](const PhaseState& s) { return angular_casimirs(s, m).first; };
}

Observable casimir_lower_observable(int m, int dim) {
  check_block(m, dim);
  return [m](const PhaseState& s) { return angular_casimirs(s, m).second; };
}

Observable runge_lenz_observable(int i, const ModelParams& par) {
  return [i, par](const PhaseState& s) { return runge_lenz(s, par)[i]; };
}

std::vector<double> observable_gradient(const Observable& f, const PhaseState& at) {
  const int n = state_dim(at);
  double amax = 0.0;
  for (double v : at.q) amax = std::max(amax, std::abs(v));
  for (double v : at.p) amax = std::max(amax, std::abs(v));
  const double h0 = 1e-4 * std::max(1.0, amax);

  std::vector<double> grad(2 * n);
  PhaseState s = at;
  auto component = [&s, n](int idx) -> double& {
    return idx < n ? s.q[idx] : s.p[idx - n];
  };
  for (int idx = 0; idx < 2 * n; ++idx) {
    double& x = component(idx);
    const double x0 = x;
    auto central = [&](double step) {
      x = x0 + step;
      const double fp = f(s);
      x = x0 - step;
      const double fm = f(s);
      x = x0;
      return (fp - fm) / (2.0 * step);
    };
    // One Richardson step: (4 D(h/2) - D(h)) / 3 kills the O(h^2) term.
    const double d1 = central(h0);
    const double d2 = central(0.5 * h0);
    grad[idx] = (4.0 * d2 - d1) / 3.0;
  }
  return grad;
}

double poisson_bracket(const Observable& f, const Observable& g, const PhaseState& at) {
  const int n = state_dim(at);
  const std::vector<double> gf = observable_gradient(f, at);
  const std::vector<double> gg = observable_gradient(g, at);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += gf[i] * gg[n + i] - gf[n + i] * gg[i];
  return sum;
}

int functional_independence_rank(const std::vector<PhaseState>& samples,
                                 const ModelParams& par) {
  if (samples.empty())
    throw std::invalid_argument("functional_independence_rank: no samples");
  const int n = state_dim(samples.front());

  // {H, C^(2..N), C_(2..N-1), R_1}: the duplicate C_(N) = C^(N) is omitted,
  // leaving exactly 2N-1 functions.
  std::vector<Observable> set;
  set.push_back(hamiltonian_observable(par));
  for (int m = 2; m <= n; ++m) set.push_back(casimir_upper_observable(m));
  for (int m = 2; m <= n - 1; ++m) set.push_back(casimir_lower_observable(m, n));
  set.push_back(runge_lenz_observable(0, par));
  const int rows = static_cast<int>(set.size());

  Eigen::MatrixXd jac(rows, 2 * n * static_cast<int>(samples.size()));
  for (std::size_t s = 0; s < samples.size(); ++s)
    for (int f = 0; f < rows; ++f) {
      const std::vector<double> grad = observable_gradient(set[f], samples[s]);
      for (int c = 0; c < 2 * n; ++c)
        jac(f, static_cast<int>(s) * 2 * n + c) = grad[c];
    }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = 1e-8 * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

std::vector<PhaseState> sample_states(int count, int dim, std::uint64_t seed,
                                      double p_scale) {
  if (count < 0 || dim < 2)
    throw std::invalid_argument("sample_states: need count >= 0 and dim >= 2");
  std::mt19937_64 rng(seed);
  // Explicit uint64 -> [0,1) mapping: std::uniform_real_distribution is not
  // bit-reproducible across standard libraries.
  auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<PhaseState> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    PhaseState s;
    s.q.resize(dim);
    s.p.resize(dim);
    for (double& v : s.q) v = 2.0 * unit() - 1.0;
    const double r = norm(s.q);
    if (r < 1e-3) continue;  // resample nearly-degenerate directions
    const double target = 0.5 + 1.5 * unit();
    for (double& v : s.q) v *= target / r;
    for (double& v : s.p) v = p_scale * (2.0 * unit() - 1.0);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace taubnut
