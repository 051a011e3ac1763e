#include <benchmark/benchmark.h>

#include "rfplan/meta_graph.hpp"
#include "rfplan/rng.hpp"

static void BM_ShortestPath(benchmark::State& state) {
  using namespace rfplan;
  GraphParams params;
  params.turn_radius = 0.5;
  params.speed = 0.6;
  ReachGraph g({0, 0, 0}, params);
  Rng rng(5);
  // random DAG-ish roadmap
  for (int i = 0; i < 400; ++i) {
    const VertexId id = g.add_vertex({rng.uniform(0, 20), rng.uniform(0, 20), 0.0});
    const VertexId parent = static_cast<VertexId>(rng.uniform_index(id));
    Trajectory traj;
    traj.samples.push_back({0.0, g.vertex(parent).state, {}});
    traj.samples.push_back({rng.uniform(0.5, 3.0), g.vertex(id).state, {}});
    g.add_edge(parent, id, traj, 0.0);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        shortest_path(g, 0, static_cast<VertexId>(1 + rng.uniform_index(400))));
  }
}
BENCHMARK(BM_ShortestPath);
