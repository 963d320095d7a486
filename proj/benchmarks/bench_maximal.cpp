// Microbenchmarks for the maximal-operator hot paths: exact atomic
// evaluation, prefix-sum ball integrals, full field-point evaluation and the
// accumulator build.

#include <benchmark/benchmark.h>

#include "capmax/maximal.hpp"
#include "capmax/rng.hpp"

using namespace capmax;

namespace {

AtomicMeasure random_measure(std::size_t atoms, std::uint64_t seed) {
  SplitMix64 rng(seed);
  AtomicMeasure nu;
  nu.dim = 2;
  for (std::size_t i = 0; i < atoms; ++i)
    nu.add_atom(Point(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)), rng.uniform(0.01, 1.0));
  return nu;
}

ScalarField gaussian_field(double h) {
  PresetSpec spec;
  spec.preset = FieldPreset::gaussian;
  spec.sigma = 1.0;
  return make_field(spec, Grid::centered(2, 8.0, h));
}

}  // namespace

static void BM_AtomicMaximal(benchmark::State& state) {
  const AtomicMeasure nu = random_measure(static_cast<std::size_t>(state.range(0)), 17);
  const RadialProfile p = RadialProfile::wobble(1.0, 2.0, 0.2);
  SplitMix64 rng(3);
  for (auto _ : state) {
    const Point x(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
    benchmark::DoNotOptimize(maximal_at_point_measure(nu, p, x));
  }
}
BENCHMARK(BM_AtomicMaximal)->Arg(10)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_AccumulatorBuild(benchmark::State& state) {
  const ScalarField f = gaussian_field(8.0 / state.range(0));
  for (auto _ : state) {
    FieldAccumulator acc(f);
    benchmark::DoNotOptimize(acc.total_mass());
  }
  state.SetItemsProcessed(state.iterations() * f.grid.cell_count());
}
BENCHMARK(BM_AccumulatorBuild)->Arg(64)->Arg(256);

static void BM_BallMassQuery(benchmark::State& state) {
  const ScalarField f = gaussian_field(0.0625);
  const FieldAccumulator acc(f);
  SplitMix64 rng(5);
  for (auto _ : state) {
    const Point x(rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0));
    benchmark::DoNotOptimize(acc.ball_mass(x, rng.uniform(0.1, 8.0)));
  }
}
BENCHMARK(BM_BallMassQuery);

static void BM_FieldMaximalPoint(benchmark::State& state) {
  const ScalarField f = gaussian_field(0.0625);
  const FieldAccumulator acc(f);
  const RadialProfile p = RadialProfile::lebesgue(2);
  RadiusPolicy policy;
  policy.count = static_cast<int>(state.range(0));
  SplitMix64 rng(9);
  for (auto _ : state) {
    const Point x(rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0));
    benchmark::DoNotOptimize(maximal_at_point_field(acc, p, x, policy));
  }
}
BENCHMARK(BM_FieldMaximalPoint)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
