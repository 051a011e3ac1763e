#include <benchmark/benchmark.h>

#include "rfplan/rng.hpp"
#include "rfplan/world.hpp"

static void BM_FootprintFree(benchmark::State& state) {
  using namespace rfplan;
  Environment env;
  env.bounds = {{0, 0}, {20, 20}};
  Rng rng(3);
  for (int i = 0; i < 12; ++i) {
    env.obstacles.push_back({{rng.uniform(2, 18), rng.uniform(2, 18)}, 0.4});
  }
  KnowledgeMap map(env.bounds);
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
    map.sense({rng.uniform(2, 18), rng.uniform(2, 18)}, env, 3.0, i * 0.1);
  }
  const RobustFootprint fp{0.5};
  std::size_t i = 0;
  for (auto _ : state) {
    PlannerState p{2.0 + (i % 160) * 0.1, 2.0 + (i % 160) * 0.1, 0.0};
    ++i;
    benchmark::DoNotOptimize(footprint_free(p, fp, map));
  }
}
BENCHMARK(BM_FootprintFree)->Arg(50)->Arg(200);
