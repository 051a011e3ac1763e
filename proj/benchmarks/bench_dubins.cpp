#include <benchmark/benchmark.h>

#include "rfplan/dubins.hpp"
#include "rfplan/rng.hpp"

static void BM_DubinsShortest(benchmark::State& state) {
  rfplan::Rng rng(1);
  std::vector<std::pair<rfplan::PlannerState, rfplan::PlannerState>> pairs;
  for (int i = 0; i < 256; ++i) {
    pairs.push_back({{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-3, 3)},
                     {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-3, 3)}});
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ & 255];
    benchmark::DoNotOptimize(rfplan::dubins_shortest(a, b, 0.5));
  }
}
BENCHMARK(BM_DubinsShortest);

static void BM_DubinsTrajectory(benchmark::State& state) {
  const rfplan::PlannerState a{0, 0, 0}, b{4, 3, 1.2};
  const auto path = rfplan::dubins_shortest(a, b, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rfplan::dubins_trajectory(a, path, 0.6, 0.01));
  }
}
BENCHMARK(BM_DubinsTrajectory);
