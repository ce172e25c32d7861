// Acceptance battery: twelve end-to-end checks of the library + CLI, one
// pass/fail line each.  Exits nonzero if any check fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "taubnut/dynamics.hpp"
#include "taubnut/integrals.hpp"
#include "taubnut/model.hpp"
#include "taubnut/operator_grid.hpp"
#include "taubnut/radial_oracle.hpp"
#include "taubnut/spectrum.hpp"

using namespace taubnut;
namespace fs = std::filesystem;

namespace {

int failures = 0;

bool pass_or(double value, double tol) { return value < tol; }

void report(int idx, const char* title, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %-52s %s\n", pass ? "PASS" : "FAIL", idx, title,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double oracle_energy(int n, int l, const ModelParams& par, int points) {
  const RadialGrid grid = default_level_grid(n, l, par, points);
  return lowest_eigenpairs(discretize(l, par, grid), n + 1)[n].energy;
}

// --- 1: closed-form spectrum vs the discretized radial eigensolver ---
void check_spectrum_oracle() {
  Timer timer;
  const double tol = 5e-5;
  double worst_diff = 0.0, order_lo = 1e9, order_hi = 0.0;
  for (double eta : {0.0, 0.1, 0.5}) {
    const ModelParams par(eta, 1.0, 1.0, 3);
    for (int l = 0; l <= 2; ++l)
      for (int n = 0; n <= 3; ++n) {
        const double ef = bound_energy(n, l, par);
        const double d1 = std::fabs(ef - oracle_energy(n, l, par, 6000));
        const double d2 = std::fabs(ef - oracle_energy(n, l, par, 11999));
        const double order = std::log2(d1 / d2);
        worst_diff = std::max(worst_diff, d1);
        order_lo = std::min(order_lo, order);
        order_hi = std::max(order_hi, order);
      }
  }
  const double sec = timer.seconds();
  const bool pass = worst_diff < tol && order_lo > 1.8 && order_hi < 2.2 &&
                    sec < 60.0;
  report(1, "spectrum formula vs radial eigensolver (36 levels)", pass,
         fmt("max |dE| %.2e (tol %.0e), order [%.2f, %.2f], %.1f s", worst_diff,
             tol, order_lo, order_hi, sec));
}

// --- 2: flat-limit ground state ---
void check_kepler_anchor() {
  const ModelParams par(0.0, 1.0, 1.0, 3);
  const double ef = bound_energy(0, 0, par);
  const double diff = std::fabs(ef - oracle_energy(0, 0, par, 6000));
  const bool pass = ef == -0.5 && diff < 2e-5;
  report(2, "flat-limit ground energy -1/2 (exact + eigensolver)", pass,
         fmt("E = %.17g, |dE_oracle| = %.2e", ef, diff));
}

// --- 3: small-deformation slope of the energies ---
void check_perturbative_slope() {
  Timer timer;
  const double k = 1.0, hbar = 1.0;
  const std::vector<std::pair<int, int>> levels = {
      {0, 0}, {1, 0}, {0, 1}, {2, 1}, {1, 2}};
  double worst = 0.0;
  for (const auto& [n, l] : levels) {
    const double h = 1e-5;
    auto energy = [&](double eta) {
      return bound_energy(n, l, ModelParams(eta, k, hbar, 3));
    };
    const double d1 = (energy(h) - energy(0.0)) / h;
    const double d2 = (energy(2.0 * h) - energy(0.0)) / (2.0 * h);
    const double slope = 2.0 * d1 - d2;
    const double nt = nu_tilde(n, l, ModelParams(0.0, k, hbar, 3));
    const double expected = k * k * k / (2.0 * std::pow(hbar * nt, 4.0));
    worst = std::max(worst, std::fabs(slope - expected) / expected);
  }
  const double sec = timer.seconds();
  const bool pass = worst < 0.01 && sec < 1.0;
  report(3, "dE/deta at eta=0 matches k^3/(2 hbar^4 Nt^4)", pass,
         fmt("worst rel dev %.2e (tol 1e-02), %.2f s", worst, sec));
}

// --- 4: drift of all 2N-1 integrals over long bound orbits ---
void check_conservation() {
  Timer timer;
  double worst = 0.0;
  double min_periods = 1e9;
  for (int dim : {2, 3}) {
    const ModelParams par(dim == 2 ? 0.35 : 0.2, dim == 2 ? 1.5 : 2.0, 1.0, dim);
    const PhaseState init =
        dim == 2 ? PhaseState{{0.9, -0.3}, {0.2, 0.8}}
                 : PhaseState{{1.0, 0.3, -0.2}, {0.15, 0.6, 0.35}};
    IntegrationOptions io;
    io.tol = 1e-12;
    // measure the radial period on a short run, then integrate 21 of them
    const double t_probe = 20.0;
    const double period = radial_period(integrate(init, t_probe, io, par));
    const double t_end = 21.0 * period;
    const Trajectory traj = integrate(init, t_end, io, par);
    min_periods = std::min(min_periods, t_end / period);
    for (const auto& [key, drift] : traj.invariant_drift)
      worst = std::max(worst, drift);
  }
  const double sec = timer.seconds();
  const bool pass = worst < 1e-9 && min_periods >= 20.0 && sec < 30.0;
  report(4, "2N-1 integrals conserved over 21 radial periods", pass,
         fmt("max rel drift %.2e (tol 1e-09), N in {2,3}, %.1f s", worst, sec));
}

// --- 5: algebraic identity tying R^2 to L^2 and H ---
void check_runge_lenz_identity() {
  double worst = 0.0;
  for (int dim : {2, 3, 4})
    for (double eta : {0.0, 0.3, 1.2}) {
      const ModelParams par(eta, 1.0, 1.0, dim);
      for (const PhaseState& st : sample_states(1000, dim, 5))
        worst = std::max(worst, runge_lenz_identity_residual(st, par));
    }
  report(5, "R^2 = 2 L^2 H + (eta H + k)^2 on random states", pass_or(worst, 1e-10),
         fmt("max rel residual %.2e (tol 1e-10), 9000 states", worst));
}

// --- 6: Poisson-bracket relations of the full integral algebra ---
void check_poisson_algebra() {
  double worst = 0.0;
  for (int dim : {2, 3}) {
    const ModelParams par(dim == 2 ? 0.3 : 0.5, 1.0, 1.0, dim);
    const Observable ham_obs = hamiltonian_observable(par);
    for (const PhaseState& st : sample_states(100, dim, 6)) {
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
          worst = std::max(worst,
                           std::fabs(poisson_bracket(
                               ham_obs, angular_momentum_observable(i, j), st)));
      for (int m = 2; m <= dim; ++m) {
        worst = std::max(worst, std::fabs(poisson_bracket(
                                    ham_obs, casimir_upper_observable(m), st)));
        worst = std::max(worst,
                         std::fabs(poisson_bracket(
                             ham_obs, casimir_lower_observable(m, dim), st)));
      }
      for (int i = 0; i < dim; ++i)
        worst = std::max(worst, std::fabs(poisson_bracket(
                                    ham_obs, runge_lenz_observable(i, par), st)));

      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
          for (int k = 0; k < dim; ++k)
            for (int l = k + 1; l < dim; ++l) {
              const double br =
                  poisson_bracket(angular_momentum_observable(i, j),
                                  angular_momentum_observable(k, l), st);
              const double want =
                  (i == k ? angular_momentum(st, j, l) : 0.0) +
                  (j == l ? angular_momentum(st, i, k) : 0.0) -
                  (i == l ? angular_momentum(st, j, k) : 0.0) -
                  (j == k ? angular_momentum(st, i, l) : 0.0);
              worst = std::max(worst, std::fabs(br - want));
            }

      const std::vector<double> rvec = runge_lenz(st, par);
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
          for (int k = 0; k < dim; ++k) {
            const double br =
                poisson_bracket(angular_momentum_observable(i, j),
                                runge_lenz_observable(k, par), st);
            const double want =
                (i == k ? rvec[j] : 0.0) - (j == k ? rvec[i] : 0.0);
            worst = std::max(worst, std::fabs(br - want));
          }

      const double hval = hamiltonian(st, par);
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
          const double br = poisson_bracket(runge_lenz_observable(i, par),
                                            runge_lenz_observable(j, par), st);
          worst = std::max(
              worst, std::fabs(br + 2.0 * hval * angular_momentum(st, i, j)));
        }
    }
  }
  report(6, "Poisson algebra of {H, J, C, R} on random states",
         pass_or(worst, 1e-7),
         fmt("max bracket deviation %.2e (tol 1e-07)", worst));
}

// --- 7: functional independence of the 2N-1 integrals ---
void check_rank() {
  const int r2 = functional_independence_rank(sample_states(32, 2, 7),
                                              ModelParams(0.5, 1.0, 1.0, 2));
  const int r3 = functional_independence_rank(sample_states(32, 3, 7),
                                              ModelParams(0.5, 1.0, 1.0, 3));
  report(7, "integral Jacobians have rank 2N-1 (N = 2, 3)",
         r2 == 3 && r3 == 5, fmt("rank N=2: %d (want 3), N=3: %d (want 5)", r2, r3));
}

// --- 8: closed-form eigenfunctions solve the radial equation ---
void check_eigenfunction_residual() {
  const ModelParams par(0.5, 1.0, 1.0, 3);
  const std::vector<std::pair<int, int>> levels = {{0, 0}, {1, 0}, {2, 0},
                                                   {0, 1}, {1, 1}, {0, 2}};
  double worst = 0.0;
  for (const auto& [n, l] : levels) {
    const QuantumLevel lv = make_level(n, l, par);
    const RadialWavefunction psi = eigenfunction(lv, par);
    auto residual = [&](int points) {
      const RadialGrid grid = default_level_grid(n, l, par, points);
      std::vector<double> samples(grid.points);
      for (int i = 0; i < grid.points; ++i) samples[i] = psi(grid.r(i));
      return residual_norm(samples, lv.energy, l, par, grid);
    };
    const double rc = residual(3000);
    const double rf = residual(5999);
    worst = std::max(worst, std::fabs((4.0 * rf - rc) / 3.0));
  }
  report(8, "eigenfunctions satisfy the radial ODE (6 levels)",
         pass_or(worst, 1e-6),
         fmt("max extrapolated residual %.2e (tol 1e-06)", worst));
}

// --- 9: weighted orthonormality of the radial eigenfunctions ---
void check_orthonormality() {
  double worst = 0.0;
  for (double eta : {0.0, 0.5})
    for (int l : {0, 1}) {
      const ModelParams par(eta, 1.0, 1.0, 3);
      std::vector<RadialWavefunction> psis;
      for (int n = 0; n <= 4; ++n)
        psis.push_back(eigenfunction(make_level(n, l, par), par));
      for (std::size_t a = 0; a < psis.size(); ++a)
        for (std::size_t b = a; b < psis.size(); ++b) {
          const double g = inner_product(psis[a], psis[b]);
          worst = std::max(worst, std::fabs(g - (a == b ? 1.0 : 0.0)));
        }
    }
  report(9, "Gram matrix of psi_0..4 under the weighted product",
         pass_or(worst, 1e-8), fmt("max |G - I| %.2e (tol 1e-08)", worst));
}

// --- 10: operator commutators vanish at the discretization order ---
void check_quantum_commutators() {
  Timer timer;
  const ModelParams par(0.5, 1.0, 1.0, 2);
  auto ham = [&par](const GridField& x) { return apply_hamiltonian(x, par); };
  auto cas = [&par](const GridField& x) { return apply_casimir(x, 2, par); };
  auto rl = [&par](const GridField& x) { return apply_runge_lenz(x, 0, par); };

  std::vector<double> rc, rr, rid;
  for (int pts : {64, 128, 256}) {
    const GridSpec g = default_grid(2, pts);
    const GridField f = random_test_field(g, 7);
    rc.push_back(commutator_residual(ham, cas, f, par));
    rr.push_back(commutator_residual(ham, rl, f, par));
    rid.push_back(quantum_runge_lenz_identity_residual(f, par));
  }
  double order_min = 1e9;
  for (int i = 0; i < 2; ++i) {
    order_min = std::min(order_min, std::log2(rc[i] / rc[i + 1]));
    order_min = std::min(order_min, std::log2(rr[i] / rr[i + 1]));
    order_min = std::min(order_min, std::log2(rid[i] / rid[i + 1]));
  }
  const double sec = timer.seconds();
  const bool pass = order_min >= 2.0 && sec < 120.0;
  report(10, "[H,C], [H,R], R^2 identity vanish at order >= 2", pass,
         fmt("min observed order %.2f over 64/128/256 grids, %.1f s", order_min,
             sec));
}

// --- 11: effective-potential scan through the CLI ---
void check_effective_potential_scan() {
  const fs::path dir = fs::temp_directory_path() / "taubnut_acceptance";
  fs::create_directories(dir);
  const fs::path cfg = dir / "effpot.json";
  std::ofstream(cfg) << R"({"eta": 0.0, "k": 8.0, "hbar": 1.0, "dim": 3,
    "effpot": {"l2": 2.0, "r_min": 0.05, "r_max": 2.0, "samples": 40,
               "etas": [0.0, 0.05, 0.2, 0.4]}})";
  const std::string cmd = std::string(TAUBNUT_CLI_PATH) + " effpot --config " +
                          cfg.string() + " --out " + dir.string() +
                          " --quiet >/dev/null 2>&1";
  if (std::system(cmd.c_str()) != 0) {
    report(11, "effective-potential scan (CLI)", false, "effpot command failed");
    return;
  }

  std::ifstream in(dir / "effpot.csv");
  std::vector<std::vector<double>> table;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    table.push_back(std::move(row));
  }

  // clause 1: larger eta gives a larger potential at every sampled r
  bool monotone = true;
  double bad_r = 0.0;
  for (const auto& row : table)
    for (std::size_t j = 1; j + 1 < row.size(); ++j)
      if (!(row[j + 1] > row[j]) && monotone) {
        monotone = false;
        bad_r = row[0];
      }

  // clause 2: the undeformed curve bottoms out at (1/4, -16)
  double best_r = 0.0, best_u = 1e300;
  for (const auto& row : table)
    if (row[1] < best_u) {
      best_u = row[1];
      best_r = row[0];
    }
  const bool min_ok =
      std::fabs(best_r - 0.25) <= 1e-9 && std::fabs(best_u + 16.0) <= 1e-9;

  const bool pass = monotone && min_ok;
  std::string detail;
  if (monotone)
    detail = fmt("eta-ordering holds at all 40 samples; min (%.17g, %.17g)",
                 best_r, best_u);
  else
    detail = fmt("eta-ordering reverses at r = %g (U_eff flips sign with "
                 "eta at r < L^2/(2k) = 0.125); min clause %s: (%.17g, %.17g)",
                 bad_r, min_ok ? "holds" : "fails", best_r, best_u);
  report(11, "potential scan: eta-ordering + flat minimum (CLI)", pass, detail);
}

// --- 12: hydrogen-like degeneracy of the deformed spectrum ---
void check_degeneracy() {
  bool equal_ok = true;
  for (double eta : {0.0, 0.1, 0.7}) {
    const ModelParams par(eta, 1.0, 1.0, 3);
    for (int p = 0; p <= 6; ++p) {
      const double e0 = bound_energy(p, 0, par);
      for (int l = 0; l <= p; ++l)
        equal_ok = equal_ok && bound_energy(p - l, l, par) == e0;
    }
  }
  bool count_ok = true;
  const ModelParams par(0.3, 1.0, 1.0, 3);
  for (int p = 0; p <= 8; ++p)
    count_ok = count_ok &&
               degeneracy(p, par) ==
                   static_cast<std::uint64_t>((p + 1)) * (p + 1);
  report(12, "equal n+l levels bit-identical; N=3 count (p+1)^2",
         equal_ok && count_ok,
         fmt("bit-equality %s, degeneracy counts %s",
             equal_ok ? "holds" : "fails", count_ok ? "match" : "differ"));
}

}  // namespace

int main() {
  check_spectrum_oracle();
  check_kepler_anchor();
  check_perturbative_slope();
  check_conservation();
  check_runge_lenz_identity();
  check_poisson_algebra();
  check_rank();
  check_eigenfunction_residual();
  check_orthonormality();
  check_quantum_commutators();
  check_effective_potential_scan();
  check_degeneracy();

  if (failures)
    std::printf("%d of 12 checks failed\n", failures);
  else
    std::printf("all 12 checks passed\n");
  return failures ? 1 : 0;
}
