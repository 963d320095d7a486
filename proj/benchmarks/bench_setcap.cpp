// Microbenchmarks for the set machinery: greedy covering selection, minimal
// enclosing balls, the distance transform and full ray-traced level sets.

#include <benchmark/benchmark.h>

#include "capmax/setcap.hpp"

using namespace capmax;

static void BM_GreedySelection(benchmark::State& state) {
  SplitMix64 rng(21);
  const BallFamily family =
      random_ball_family(static_cast<std::size_t>(state.range(0)), 2, 10.0, 0.2, 2.0, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_disjoint_subfamily(family).balls.size());
  }
}
BENCHMARK(BM_GreedySelection)->Arg(100)->Arg(400)->Arg(1600);

static void BM_MinimalEnclosingBall(benchmark::State& state) {
  SplitMix64 rng(22);
  std::vector<Point> pts;
  for (std::int64_t i = 0; i < state.range(0); ++i)
    pts.push_back(Point(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimal_enclosing_ball(pts).radius);
  }
}
BENCHMARK(BM_MinimalEnclosingBall)->Arg(64)->Arg(1024)->Arg(16384);

static void BM_DistanceTransform(benchmark::State& state) {
  const auto n = state.range(0);
  const Grid g = Grid::make(2, Point(0.0, 0.0), 1.0 / static_cast<double>(n), {n, n});
  SplitMix64 rng(23);
  std::vector<char> source(static_cast<std::size_t>(g.cell_count()));
  for (auto& s : source) s = rng.next_double() < 0.1 ? 1 : 0;
  source[0] = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(squared_distance_transform(g, source).front());
  }
  state.SetItemsProcessed(state.iterations() * g.cell_count());
}
BENCHMARK(BM_DistanceTransform)->Arg(128)->Arg(512);

static void BM_RayTracedLevelSet(benchmark::State& state) {
  AtomicMeasure nu;
  nu.dim = 2;
  nu.add_atom(Point(-1.0, 0.0), 0.5);
  nu.add_atom(Point(1.0, 0.0), 0.5);
  const RadialProfile p = RadialProfile::wobble(1.0, 2.0, 0.2);
  LevelSetOptions opts;
  opts.directions = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(level_set_bounds(nu, p, 1e-3, opts).bounds.upper);
  }
}
BENCHMARK(BM_RayTracedLevelSet)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
