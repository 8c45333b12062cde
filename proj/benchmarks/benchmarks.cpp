#include <complex>
#include <vector>

#include <benchmark/benchmark.h>

#include "memoryflow/field_solver.hpp"
#include "memoryflow/freespace.hpp"
#include "memoryflow/kernel.hpp"
#include "memoryflow/memory_op.hpp"
#include "memoryflow/scalar_msd.hpp"
#include "memoryflow/walker.hpp"

namespace mf = memoryflow;
using cd = std::complex<double>;

namespace {

const auto kSpec = mf::KernelSpec::normalized_fractional(0.5, 0.2);

void BM_SymbolSeries(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(mf::detail::symbol_unrestricted(kSpec, cd(2.0, 1.5)));
}
BENCHMARK(BM_SymbolSeries);

void BM_SymbolContinuedFraction(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(mf::detail::symbol_unrestricted(kSpec, cd(90.0, 20.0)));
}
BENCHMARK(BM_SymbolContinuedFraction);

void BM_SymbolAsymptotic(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(mf::detail::symbol_unrestricted(kSpec, cd(40.0, 190.0)));
}
BENCHMARK(BM_SymbolAsymptotic);

void BM_SymbolGapQuadrature(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(mf::detail::symbol_unrestricted(kSpec, cd(-30.0, 80.0)));
}
BENCHMARK(BM_SymbolGapQuadrature);

void BM_BuildWeights(benchmark::State& state) {
  double tau = kSpec.delta / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mf::build_weights(kSpec, tau));
}
BENCHMARK(BM_BuildWeights)->Arg(128)->Arg(1024);

void BM_ApplyOperator(benchmark::State& state) {
  auto w = mf::build_weights(kSpec, kSpec.delta / static_cast<double>(state.range(0)));
  std::vector<double> hist(static_cast<std::size_t>(w.M), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(mf::apply(w, 2.0, hist));
}
BENCHMARK(BM_ApplyOperator)->Arg(128)->Arg(1024);

void BM_InvertShortTime(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(mf::invert(kSpec, 0.4, 0.05).value);
}
BENCHMARK(BM_InvertShortTime);

void BM_InvertHyperbola(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(mf::invert(kSpec, 0.4, 1.0).value);
}
BENCHMARK(BM_InvertHyperbola);

void BM_FieldStep1D(benchmark::State& state) {
  auto grid = mf::Grid::line(-4.0, 4.0, static_cast<int>(state.range(0)));
  auto model = mf::Model::nonlocal(kSpec);
  double tau = kSpec.delta / 64.0;
  auto w = mf::build_weights(kSpec, tau);
  auto hist = mf::HistoryField::uniform(mf::dirac_field(grid, 0.0), w.M);
  for (auto _ : state) benchmark::DoNotOptimize(mf::step(model, w, hist, grid));
}
BENCHMARK(BM_FieldStep1D)->Arg(512)->Arg(4096);

void BM_FieldStep2D(benchmark::State& state) {
  auto grid = mf::Grid::square(0.0, 1.0, static_cast<int>(state.range(0)));
  auto spec = mf::KernelSpec::normalized_fractional(0.5, 1.0);
  auto model = mf::Model::nonlocal(spec);
  double tau = 0.01;
  auto w = mf::build_weights(spec, tau);
  auto hist = mf::HistoryField::uniform(mf::dirac_ring_field(grid), w.M);
  for (auto _ : state) benchmark::DoNotOptimize(mf::step(model, w, hist, grid));
}
BENCHMARK(BM_FieldStep2D)->Arg(32)->Arg(64);

void BM_WalkerBatch(benchmark::State& state) {
  double alpha = 0.75, delta = 0.2, tau = delta / 64.0;
  auto pmf = mf::build_pmf(alpha, delta, tau);
  mf::WalkerConfig cfg;
  cfg.alpha = alpha;
  cfg.delta = delta;
  cfg.tau = tau;
  cfg.h = mf::calibrated_h(alpha, delta, tau);
  cfg.particles = state.range(0);
  cfg.record_times = {0.1, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(mf::simulate(cfg, pmf));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WalkerBatch)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_TransformModeMarch(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(mf::transform_mode(kSpec, 3.0, 0.3));
}
BENCHMARK(BM_TransformModeMarch);

}  // namespace

BENCHMARK_MAIN();
