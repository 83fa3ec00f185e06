#include <benchmark/benchmark.h>

#include "hypan/evolve.hpp"
#include "hypan/localize.hpp"
#include "hypan/modela.hpp"
#include "hypan/spectral.hpp"

using namespace hypan;

namespace {

void bm_symbol_det(benchmark::State& state) {
  SystemSymbol sys = build_model_system(cplx(0, 2));
  for (auto _ : state) {
    Polynomial d = sys.symbol_matrix().det();
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(bm_symbol_det);

void bm_localize(benchmark::State& state) {
  SystemSymbol sys = build_model_system(cplx(0, 2));
  CotangentPoint rho =
      make_point(2, 0.0, Eigen::Vector2d(0.0, 0.0), 0.0, Eigen::Vector2d(0.0, 1.0));
  for (auto _ : state) {
    LocalizedSystem loc = localize(sys, rho);
    benchmark::DoNotOptimize(loc);
  }
}
BENCHMARK(bm_localize);

void bm_mode_operators(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ModeDiscretization disc = mode_operators(0.5, 16.0, n);
    benchmark::DoNotOptimize(disc);
  }
}
BENCHMARK(bm_mode_operators)->Arg(65)->Arg(129)->Arg(257);

void bm_rk4_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ModeDiscretization disc = mode_operators(0.5, 16.0, n);
  Eigen::MatrixXcd M = disc.generator();
  ModeState st{disc.kappa, 0.0, initial_gaussian(disc)};
  double dt = 0.5 * cfl_dt(disc);
  for (auto _ : state) {
    st = step_rk4(M, st, dt);
    benchmark::DoNotOptimize(st);
  }
}
BENCHMARK(bm_rk4_step)->Arg(65)->Arg(129);

void bm_abscissa(benchmark::State& state) {
  ModeDiscretization disc = mode_operators(2.0, 16.0, 65);
  for (auto _ : state) {
    double a = spectral_abscissa(disc);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(bm_abscissa);

}  // namespace

BENCHMARK_MAIN();
