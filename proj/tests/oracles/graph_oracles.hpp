#pragma once

// Brute-force graph oracles: reverse BFS viability, exhaustive shortest-path
// enumeration, and from-scratch cost recomputation.

#include <algorithm>
#include <deque>
#include <limits>
#include <vector>

#include "rfplan/meta_graph.hpp"

namespace rfplan::test_oracle {

// Vertices that can reach home or the goal over directed edges.
inline std::vector<bool> reverse_bfs_viable(const ReachGraph& g) {
  std::vector<bool> viable(g.vertices().size(), false);
  std::deque<VertexId> frontier;
  auto seed = [&](VertexId id) {
    if (!viable[id]) {
      viable[id] = true;
      frontier.push_back(id);
    }
  };
  seed(g.home_id());
  if (g.goal_id()) seed(*g.goal_id());
  while (!frontier.empty()) {
    const VertexId u = frontier.front();
    frontier.pop_front();
    for (EdgeId eid : g.in_edges(u)) seed(g.edge(eid).from);
  }
  return viable;
}

// Minimum path cost by exhaustive simple-path enumeration with pruning.
inline double enumerate_shortest_cost(const ReachGraph& g, VertexId from, VertexId to) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> on_path(g.vertices().size(), false);

  auto dfs = [&](auto&& self, VertexId u, double cost) -> void {
    if (cost >= best) return;
    if (u == to) {
      best = cost;
      return;
    }
    on_path[u] = true;
    for (EdgeId eid : g.out_edges(u)) {
      const Edge& e = g.edge(eid);
      if (!on_path[e.to]) self(self, e.to, cost + e.cost);
    }
    on_path[u] = false;
  };
  dfs(dfs, from, 0.0);
  return best;
}

struct RecomputedCosts {
  std::vector<double> from_home;
  std::vector<double> to_home;
  std::vector<double> to_goal;
};

// Bellman-Ford style full recomputation of the three cost fields.
inline RecomputedCosts recompute_costs(const ReachGraph& g) {
  const std::size_t n = g.vertices().size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  RecomputedCosts out{std::vector<double>(n, inf), std::vector<double>(n, inf),
                      std::vector<double>(n, inf)};
  out.from_home[g.home_id()] = 0.0;
  out.to_home[g.home_id()] = 0.0;
  if (g.goal_id()) out.to_goal[*g.goal_id()] = 0.0;

  for (std::size_t pass = 0; pass < n + 1; ++pass) {
    bool changed = false;
    for (const Edge& e : g.edges()) {
      if (out.from_home[e.from] + e.cost < out.from_home[e.to]) {
        out.from_home[e.to] = out.from_home[e.from] + e.cost;
        changed = true;
      }
      if (e.cost + out.to_home[e.to] < out.to_home[e.from]) {
        out.to_home[e.from] = e.cost + out.to_home[e.to];
        changed = true;
      }
      if (e.cost + out.to_goal[e.to] < out.to_goal[e.from]) {
        out.to_goal[e.from] = e.cost + out.to_goal[e.to];
        changed = true;
      }
    }
    if (!changed) break;
  }
  return out;
}

}  // namespace rfplan::test_oracle
