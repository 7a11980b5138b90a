#include <benchmark/benchmark.h>

#include "ustlocal/electric.hpp"
#include "ustlocal/generators.hpp"
#include "ustlocal/pgw.hpp"
#include "ustlocal/rooted_shape.hpp"
#include "ustlocal/samplers.hpp"

using namespace ustlocal;

static void BM_WilsonComplete(benchmark::State& state) {
  const Network net = complete_graph(static_cast<VertexId>(state.range(0)));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(wilson(net, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WilsonComplete)->Arg(50)->Arg(200)->Arg(500);

static void BM_WilsonRandomRegular(benchmark::State& state) {
  Rng gen(7);
  const Network net = random_regular_graph(static_cast<VertexId>(state.range(0)), 10, gen);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(wilson(net, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WilsonRandomRegular)->Arg(200)->Arg(2000);

static void BM_AldousBroderComplete(benchmark::State& state) {
  const Network net = complete_graph(static_cast<VertexId>(state.range(0)));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(aldous_broder(net, rng));
}
BENCHMARK(BM_AldousBroderComplete)->Arg(50)->Arg(200);

static void BM_DenseFactorization(benchmark::State& state) {
  Rng gen(3);
  const Network net = random_regular_graph(static_cast<VertexId>(state.range(0)), 10, gen);
  for (auto _ : state) {
    LaplacianSystem system(net, SolverKind::dense);
    benchmark::DoNotOptimize(system.resistance(0, 1));
  }
}
BENCHMARK(BM_DenseFactorization)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_IterativeSolve(benchmark::State& state) {
  Rng gen(3);
  const Network net = random_regular_graph(static_cast<VertexId>(state.range(0)), 10, gen);
  const LaplacianSystem system(net, SolverKind::iterative);
  for (auto _ : state) benchmark::DoNotOptimize(system.resistance(0, 1));
}
BENCHMARK(BM_IterativeSolve)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

static void BM_FosterSum(benchmark::State& state) {
  const Network net = hypercube_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(foster_sum(net));
}
BENCHMARK(BM_FosterSum)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_CanonizePgw(benchmark::State& state) {
  Rng rng(5);
  std::vector<RootedShape> shapes;
  for (int i = 0; i < 256; ++i) shapes.push_back(sample_pgw_conditioned(rng, static_cast<int>(state.range(0))));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& s = shapes[i++ % shapes.size()];
    benchmark::DoNotOptimize(RootedShape::from_code(s.code()).stab_order());
  }
}
BENCHMARK(BM_CanonizePgw)->Arg(2)->Arg(4);
BENCHMARK_MAIN();
