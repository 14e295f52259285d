#include <benchmark/benchmark.h>

#include "neflab/calculus.hpp"
#include "neflab/config.hpp"
#include "neflab/ma_solver.hpp"

using namespace neflab;

static void BM_complex_hessian(benchmark::State& state) {
  Grid grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  SpectralTransform st(grid);
  PeriodicField u = random_band_field(grid, 0.1, 2, 7);
  for (auto _ : state) {
    HermitianField h = complex_hessian(st, u);
    benchmark::DoNotOptimize(h.entries.data());
  }
}
BENCHMARK(BM_complex_hessian)->Args({1, 256})->Args({2, 32});

static void BM_det_ratio(benchmark::State& state) {
  Grid grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  SpectralTransform st(grid);
  PeriodicField u = random_band_field(grid, 0.1, 2, 7);
  HermitianField a = complex_hessian(st, u);
  a.add_constant(HermMatrix::identity(grid.n));
  HermMatrix g = HermMatrix::identity(grid.n);
  for (auto _ : state) {
    PeriodicField r = det_ratio(a, g);
    benchmark::DoNotOptimize(r.values.data());
  }
}
BENCHMARK(BM_det_ratio)->Args({1, 256})->Args({2, 32});

static void BM_solve_ma_n1(benchmark::State& state) {
  Grid grid(1, static_cast<int>(state.range(0)));
  SpectralTransform st(grid);
  ProblemSpec spec;
  spec.grid = grid;
  spec.g = HermMatrix::identity(1);
  spec.nef = NefClassSpec::make(HermMatrix::zero(1), PeriodicField(grid));
  CosineTerm term{0.3, {1, 0}, 0.0};
  spec.F_raw = cosine_field(grid, term);
  spec.normalize_density();
  for (auto _ : state) {
    SolveResult r = solve_ma(st, spec, 1.0);
    benchmark::DoNotOptimize(r.residual_sup);
  }
}
BENCHMARK(BM_solve_ma_n1)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
