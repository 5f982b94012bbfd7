// Serial reference kernels against their OpenMP counterparts.

#include "ghostfd/assembly.hpp"
#include "ghostfd/benchmarks.hpp"
#include "ghostfd/pipeline.hpp"

#include <benchmark/benchmark.h>

using namespace ghostfd;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_GhostRows(benchmark::State& state) {
  const auto b = annulus_homogeneous();
  const Grid g(static_cast<int>(state.range(0)));
  const auto base = classify_nodes(g, b.level_set, BoundaryNodePolicy::Exterior);
  const StencilStrategy strategy;
  for (auto _ : state) {
    auto cls = base;
    auto rows = build_ghost_rows(g, cls, b.level_set, b.robin, strategy, mode(state));
    benchmark::DoNotOptimize(rows.data());
  }
  state.counters["ghosts"] = base.num_ghost();
}

void BM_Assemble(benchmark::State& state) {
  const auto b = annulus_homogeneous();
  const auto d = discretize(b, static_cast<int>(state.range(0)), StencilStrategy{}, Execution::Parallel);
  for (auto _ : state) {
    auto sys = assemble(d.classification, d.ghosts, b.coefficients, d.grid, mode(state));
    benchmark::DoNotOptimize(sys.rhs.data());
  }
  state.counters["rows"] = d.system.size();
}

void BM_Solve(benchmark::State& state) {
  const auto d = discretize(annulus_homogeneous(), static_cast<int>(state.range(0)), StencilStrategy{});
  for (auto _ : state) {
    auto rep = solve(d.system);
    benchmark::DoNotOptimize(rep.solution.data());
  }
}

}  // namespace

BENCHMARK(BM_GhostRows)->ArgsProduct({{160, 343}, {0, 1}})->ArgNames({"N", "parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Assemble)->ArgsProduct({{160, 343, 502}, {0, 1}})->ArgNames({"N", "parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->Arg(160)->Arg(343)->ArgName("N")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
