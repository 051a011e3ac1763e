#include "rfplan/meta_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <sstream>

namespace rfplan {

ReachGraph::ReachGraph(const PlannerState& home, const GraphParams& params)
    : params_(params) {
  home_id_ = add_vertex(home);
  Vertex& h = vertices_[home_id_];
  h.cost_from_home = 0.0;
  h.cost_to_home = 0.0;
  h.in_backward_set = true;
  h.visited = true;  // the system starts there
}

double ReachGraph::weighted_distance(const PlannerState& a, const PlannerState& b) const {
  const double dth = angular_distance(a.theta, b.theta) * params_.heading_weight;
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + dth * dth);
}

std::vector<VertexId> ReachGraph::k_nearest(const PlannerState& state, std::size_t k,
                                            bool backward_set_only) const {
  std::vector<std::pair<double, VertexId>> scored;
  scored.reserve(vertices_.size());
  for (const Vertex& v : vertices_) {
    if (backward_set_only && !v.in_backward_set) continue;
    scored.emplace_back(weighted_distance(state, v.state), v.id);
  }
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end());
  std::vector<VertexId> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(scored[i].second);
  return out;
}

std::optional<VertexId> ReachGraph::find_matching(const PlannerState& state) const {
  for (const Vertex& v : vertices_) {
    if (states_match(v.state, state)) return v.id;
  }
  return std::nullopt;
}

VertexId ReachGraph::add_vertex(const PlannerState& state) {
  const VertexId id = static_cast<VertexId>(vertices_.size());
  Vertex v;
  v.id = id;
  v.state = state;
  v.state.theta = wrap_angle(v.state.theta);
  vertices_.push_back(v);
  out_edges_.emplace_back();
  in_edges_.emplace_back();
  return id;
}

EdgeId ReachGraph::add_edge(VertexId from, VertexId to, Trajectory trajectory,
                            double knowledge_stamp) {
  const EdgeId id = static_cast<EdgeId>(edges_.size());
  Edge e;
  e.id = id;
  e.from = from;
  e.to = to;
  e.cost = trajectory.duration();
  e.trajectory = std::move(trajectory);
  e.knowledge_stamp = knowledge_stamp;
  edges_.push_back(std::move(e));
  out_edges_[from].push_back(id);
  in_edges_[to].push_back(id);
  return id;
}

std::vector<VertexId> ReachGraph::promote_to_backward_set(VertexId id) {
  std::vector<VertexId> promoted;
  std::deque<VertexId> frontier;
  if (!vertices_[id].in_backward_set) {
    vertices_[id].in_backward_set = true;
    promoted.push_back(id);
    frontier.push_back(id);
  }
  // Every vertex that can reach a viable vertex is viable.
  while (!frontier.empty()) {
    const VertexId u = frontier.front();
    frontier.pop_front();
    for (EdgeId eid : in_edges_[u]) {
      const VertexId w = edges_[eid].from;
      if (!vertices_[w].in_backward_set) {
        vertices_[w].in_backward_set = true;
        promoted.push_back(w);
        frontier.push_back(w);
      }
    }
  }
  return promoted;
}

void ReachGraph::set_goal(VertexId id) {
  goal_id_ = id;
  vertices_[id].cost_to_goal = 0.0;
  promote_to_backward_set(id);
  update_costs(*this, in_edges_[id]);
}

std::optional<PlannerState> sample_candidate(const KnowledgeMap& map,
                                             const RobustFootprint& fp, Rng& rng) {
  const Box& bounds = map.bounds();
  PlannerState p;
  p.x = rng.uniform(bounds.lo.x, bounds.hi.x);
  p.y = rng.uniform(bounds.lo.y, bounds.hi.y);
  p.theta = std::numbers::pi - rng.next_double() * 2.0 * std::numbers::pi;  // (-pi, pi]
  if (!footprint_free(p, fp, map)) return std::nullopt;
  return p;
}

bool outbound_expand(ReachGraph& g, const PlannerState& p_new, const KnowledgeMap& map,
                     const RobustFootprint& fp, std::size_t k, double t) {
  if (!p_new.finite()) return false;
  if (g.find_matching(p_new)) return false;  // duplicate suppression
  if (!footprint_free(p_new, fp, map)) return false;

  const GraphParams& params = g.params();
  for (VertexId parent : g.k_nearest(p_new, k)) {
    auto traj = dubins_connect(g.vertex(parent).state, p_new, params.turn_radius,
                               params.speed, params.sample_dt);
    if (!traj) continue;
    if (!trajectory_safe(*traj, fp, map, params.speed, params.safety_check_gap)) continue;
    const VertexId id = g.add_vertex(p_new);
    const EdgeId eid = g.add_edge(parent, id, std::move(*traj), t);
    update_costs(g, {eid});
    return true;
  }
  return false;
}

bool inbound_consolidate(ReachGraph& g, VertexId v_id, const KnowledgeMap& map,
                         const RobustFootprint& fp, std::size_t k, double t) {
  if (g.vertex(v_id).in_backward_set) return false;

  const GraphParams& params = g.params();
  for (VertexId target : g.k_nearest(g.vertex(v_id).state, k, /*backward_set_only=*/true)) {
    if (target == v_id) continue;
    auto traj = dubins_connect(g.vertex(v_id).state, g.vertex(target).state,
                               params.turn_radius, params.speed, params.sample_dt);
    if (!traj) continue;
    if (!trajectory_safe(*traj, fp, map, params.speed, params.safety_check_gap)) continue;
    const EdgeId eid = g.add_edge(v_id, target, std::move(*traj), t);
    g.promote_to_backward_set(v_id);
    update_costs(g, {eid});
    return true;
  }
  return false;
}

std::optional<std::vector<EdgeId>> shortest_path(const ReachGraph& g, VertexId from,
                                                 VertexId to) {
  if (from >= g.vertices().size() || to >= g.vertices().size()) return std::nullopt;
  if (from == to) return std::vector<EdgeId>{};

  const std::size_t n = g.vertices().size();
  std::vector<double> dist(n, kInfiniteCost);
  std::vector<EdgeId> parent_edge(n, std::numeric_limits<EdgeId>::max());
  using Entry = std::pair<double, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[from] = 0.0;
  queue.push({0.0, from});

  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    if (u == to) break;
    for (EdgeId eid : g.out_edges(u)) {
      const Edge& e = g.edge(eid);
      const double nd = d + e.cost;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        parent_edge[e.to] = eid;
        queue.push({nd, e.to});
      }
    }
  }

  if (!std::isfinite(dist[to])) return std::nullopt;
  std::vector<EdgeId> path;
  for (VertexId v = to; v != from;) {
    const EdgeId eid = parent_edge[v];
    path.push_back(eid);
    v = g.edge(eid).from;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

constexpr double kRelaxEps = 1e-15;

}  // namespace

void update_costs(ReachGraph& g, const std::vector<EdgeId>& changed) {
  auto& vertices = g.vertices_;

  // Forward relaxation of cost_from_home.
  std::deque<VertexId> queue;
  for (EdgeId eid : changed) {
    const Edge& e = g.edges_[eid];
    const double via = vertices[e.from].cost_from_home + e.cost;
    if (via + kRelaxEps < vertices[e.to].cost_from_home) {
      vertices[e.to].cost_from_home = via;
      queue.push_back(e.to);
    }
  }
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (EdgeId eid : g.out_edges_[u]) {
      const Edge& e = g.edges_[eid];
      const double via = vertices[u].cost_from_home + e.cost;
      if (via + kRelaxEps < vertices[e.to].cost_from_home) {
        vertices[e.to].cost_from_home = via;
        queue.push_back(e.to);
      }
    }
  }

  // Backward relaxation of cost_to_home and cost_to_goal.
  auto relax_backward = [&](double Vertex::* field) {
    std::deque<VertexId> work;
    for (EdgeId eid : changed) {
      const Edge& e = g.edges_[eid];
      const double via = e.cost + vertices[e.to].*field;
      if (via + kRelaxEps < vertices[e.from].*field) {
        vertices[e.from].*field = via;
        work.push_back(e.from);
      }
    }
    while (!work.empty()) {
      const VertexId u = work.front();
      work.pop_front();
      for (EdgeId eid : g.in_edges_[u]) {
        const Edge& e = g.edges_[eid];
        const double via = e.cost + vertices[u].*field;
        if (via + kRelaxEps < vertices[e.from].*field) {
          vertices[e.from].*field = via;
          work.push_back(e.from);
        }
      }
    }
  };
  relax_backward(&Vertex::cost_to_home);
  relax_backward(&Vertex::cost_to_goal);
}

std::vector<std::string> ReachGraph::check_invariants() const {
  std::vector<std::string> issues;
  auto complain = [&issues](const std::string& s) { issues.push_back(s); };

  for (const Vertex& v : vertices_) {
    if (!std::isfinite(v.cost_from_home)) {
      complain("vertex " + std::to_string(v.id) + " unreachable from home");
    }
    if (v.in_backward_set && !std::isfinite(v.cost_to_home) &&
        !std::isfinite(v.cost_to_goal)) {
      complain("backward-set vertex " + std::to_string(v.id) + " has no viability witness");
    }
  }

  for (const Edge& e : edges_) {
    if (e.trajectory.empty()) {
      complain("edge " + std::to_string(e.id) + " has empty trajectory");
      continue;
    }
    if (!states_match(e.trajectory.front_state(), vertices_[e.from].state, 1e-5, 1e-5) ||
        !states_match(e.trajectory.back_state(), vertices_[e.to].state, 1e-5, 1e-5)) {
      complain("edge " + std::to_string(e.id) + " endpoints do not match its vertices");
    }
  }

  // Connectivity from home over directed edges.
  std::vector<bool> seen(vertices_.size(), false);
  std::deque<VertexId> frontier{home_id_};
  seen[home_id_] = true;
  while (!frontier.empty()) {
    const VertexId u = frontier.front();
    frontier.pop_front();
    for (EdgeId eid : out_edges_[u]) {
      const VertexId w = edges_[eid].to;
      if (!seen[w]) {
        seen[w] = true;
        frontier.push_back(w);
      }
    }
  }
  for (const Vertex& v : vertices_) {
    if (!seen[v.id]) complain("vertex " + std::to_string(v.id) + " not connected from home");
  }
  return issues;
}

}  // namespace rfplan
