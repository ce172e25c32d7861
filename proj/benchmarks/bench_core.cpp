// Microbenchmarks for the hot paths: pointwise observables, bracket
// evaluation, trajectory integration, spectrum formulas, the discretized
// radial solve, and grid operator application.

#include <benchmark/benchmark.h>

#include "taubnut/dynamics.hpp"
#include "taubnut/integrals.hpp"
#include "taubnut/model.hpp"
#include "taubnut/operator_grid.hpp"
#include "taubnut/radial_oracle.hpp"
#include "taubnut/spectrum.hpp"

using namespace taubnut;

namespace {

const ModelParams par3(0.3, 1.0, 1.0, 3);

static void bm_hamiltonian(benchmark::State& state) {
  const PhaseState st{{1.0, 0.3, -0.2}, {0.15, 0.6, 0.35}};
  for (auto _ : state) benchmark::DoNotOptimize(hamiltonian(st, par3));
}
BENCHMARK(bm_hamiltonian);

static void bm_runge_lenz(benchmark::State& state) {
  const PhaseState st{{1.0, 0.3, -0.2}, {0.15, 0.6, 0.35}};
  for (auto _ : state) benchmark::DoNotOptimize(runge_lenz(st, par3));
}
BENCHMARK(bm_runge_lenz);

static void bm_evaluate_integrals(benchmark::State& state) {
  const PhaseState st{{1.0, 0.3, -0.2}, {0.15, 0.6, 0.35}};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_integrals(st, par3));
}
BENCHMARK(bm_evaluate_integrals);

static void bm_poisson_bracket(benchmark::State& state) {
  const PhaseState st{{1.0, 0.3, -0.2}, {0.15, 0.6, 0.35}};
  const Observable h = hamiltonian_observable(par3);
  const Observable r0 = runge_lenz_observable(0, par3);
  for (auto _ : state) benchmark::DoNotOptimize(poisson_bracket(h, r0, st));
}
BENCHMARK(bm_poisson_bracket);

static void bm_integrate_orbit(benchmark::State& state) {
  const PhaseState init{{1.0, 0.3, -0.2}, {0.15, 0.6, 0.35}};
  IntegrationOptions io;
  io.tol = 1e-12;
  for (auto _ : state) {
    Trajectory traj = integrate(init, 10.0, io, par3);
    benchmark::DoNotOptimize(traj.states.size());
  }
}
BENCHMARK(bm_integrate_orbit)->Unit(benchmark::kMillisecond);

static void bm_bound_energy(benchmark::State& state) {
  for (auto _ : state)
    for (int n = 0; n <= 5; ++n)
      for (int l = 0; l <= 5; ++l)
        benchmark::DoNotOptimize(bound_energy(n, l, par3));
}
BENCHMARK(bm_bound_energy);

static void bm_eigenfunction_eval(benchmark::State& state) {
  const RadialWavefunction psi = eigenfunction(make_level(3, 1, par3), par3);
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 1; i <= 100; ++i) acc += psi(0.5 * i);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(bm_eigenfunction_eval);

static void bm_radial_solve(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  const RadialGrid grid = default_level_grid(2, 1, par3, points);
  for (auto _ : state) {
    const auto pairs = lowest_eigenpairs(discretize(1, par3, grid), 3);
    benchmark::DoNotOptimize(pairs[2].energy);
  }
}
BENCHMARK(bm_radial_solve)->Arg(1500)->Arg(3000)->Unit(benchmark::kMillisecond);

static void bm_apply_hamiltonian(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  const GridSpec g = default_grid(2, points);
  const GridField f = random_test_field(g, 1);
  for (auto _ : state) {
    GridField out = apply_hamiltonian(f, par3);
    benchmark::DoNotOptimize(out.values.data());
  }
}
BENCHMARK(bm_apply_hamiltonian)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void bm_commutator_residual(benchmark::State& state) {
  const GridSpec g = default_grid(2, 128);
  const GridField f = random_test_field(g, 1);
  auto ham = [](const GridField& x) { return apply_hamiltonian(x, par3); };
  auto cas = [](const GridField& x) { return apply_casimir(x, 2, par3); };
  for (auto _ : state)
    benchmark::DoNotOptimize(commutator_residual(ham, cas, f, par3));
}
BENCHMARK(bm_commutator_residual)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
