#include <benchmark/benchmark.h>

#include <vector>

#include "dnstrip/laplacian2d.hpp"
#include "dnstrip/optimize.hpp"
#include "dnstrip/parallel.hpp"
#include "dnstrip/schrodinger1d.hpp"

using namespace dnstrip;

namespace {

ExecPolicy policy_of(const benchmark::State& s) { return s.range(0) == 0 ? ExecPolicy::Serial : ExecPolicy::Parallel; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) == 0 ? "serial" : "parallel"); }

void BM_spmv(benchmark::State& state) {
  const StripGeometry g{1.0, 0.5};
  const auto op = assemble(g, Grid2D::make(g, 12.0, static_cast<int>(state.range(1)), BCLayout::switched(0.5),
                                           Truncation::Transparent));
  std::vector<double> x(op.dimension(), 1.0);
  std::vector<double> y(op.dimension());
  const ExecPolicy p = policy_of(state);
  for (auto _ : state) {
    spmv(op.matrix, x, y, p);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["unknowns"] = static_cast<double>(op.dimension());
  label(state);
}
BENCHMARK(BM_spmv)->ArgsProduct({{0, 1}, {32, 64, 128}});

void BM_lambda_profile(benchmark::State& state) {
  const StripGeometry g{1.0, 0.0};
  const auto f = derive_frame(g, 0.785398);
  const ExecPolicy p = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(lambda_profile(f, g, 101, 400, p));
  label(state);
}
BENCHMARK(BM_lambda_profile)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_lemma_sweep(benchmark::State& state) {
  const ExecPolicy p = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(verify_lemma(5.0, 2.0, 0.4, 64, 400, p));
  label(state);
}
BENCHMARK(BM_lemma_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_theta_scan(benchmark::State& state) {
  const ThetaScanOptions o{128, 1e-4, policy_of(state)};
  for (auto _ : state) benchmark::DoNotOptimize(optimal_theta_hardy(StripGeometry{1.0, 0.0}, o));
  label(state);
}
BENCHMARK(BM_theta_scan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_threshold_gap(benchmark::State& state) {
  SolverConfig c;
  c.ladder = {16, 32, 64};
  c.truncations = {Truncation::Transparent};
  c.policy = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(threshold_gap(StripGeometry{1.0, 0.5}, c));
  label(state);
}
BENCHMARK(BM_threshold_gap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
