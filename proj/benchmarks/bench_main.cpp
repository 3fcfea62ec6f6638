#include <benchmark/benchmark.h>

#include "ductmodes/ep_locator.hpp"
#include "ductmodes/junction.hpp"
#include "ductmodes/special_fn.hpp"
#include "ductmodes/sweeps.hpp"

using namespace ductmodes;

static void BM_BesselJ(benchmark::State& state) {
  const cplx z(static_cast<double>(state.range(0)), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(bessel_j(0, z));
}
BENCHMARK(BM_BesselJ)->Arg(2)->Arg(20)->Arg(150);

static void BM_DispersionTerms(benchmark::State& state) {
  const cplx z(12.3, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(dispersion_terms(0, z));
}
BENCHMARK(BM_DispersionTerms);

static void BM_LommelOverlap(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lommel_overlap(0, cplx(3.0, 1.2), 7.0155866698156188));
}
BENCHMARK(BM_LommelOverlap);

static void BM_FindModes(benchmark::State& state) {
  const BoundarySpec spec = BoundarySpec::admittance(30.0, 0, cplx(0.4, 0.2));
  for (auto _ : state) benchmark::DoNotOptimize(find_modes(spec, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FindModes)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_FirstEp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_eps(0, 30.0, 1));
}
BENCHMARK(BM_FirstEp)->Unit(benchmark::kMillisecond);

static void BM_SolveJunction(benchmark::State& state) {
  const BoundarySpec spec = BoundarySpec::admittance(30.0, 0, cplx(0.0993, 0.0427));
  for (auto _ : state) benchmark::DoNotOptimize(solve_junction(spec, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SolveJunction)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_SweepKp(benchmark::State& state) {
  SweepRequest req;
  req.re_min = 0.05;
  req.re_max = 0.15;
  req.im_max = 0.1;
  req.n_re = req.n_im = static_cast<int>(state.range(0));
  req.quantity = Quantity::Kp;
  for (auto _ : state) benchmark::DoNotOptimize(sweep(req));
}
BENCHMARK(BM_SweepKp)->Arg(11)->Arg(31)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
