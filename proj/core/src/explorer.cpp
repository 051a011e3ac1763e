#include "rfplan/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfplan {

std::optional<VertexId> select_unvisited(const ReachGraph& g, const Vec2& goal_position,
                                         double epsilon, Rng& rng) {
  std::vector<VertexId> unvisited;
  for (const Vertex& v : g.vertices()) {
    if (v.in_backward_set && !v.visited) unvisited.push_back(v.id);
  }
  if (unvisited.empty()) return std::nullopt;

  if (rng.bernoulli(epsilon)) {
    return unvisited[rng.uniform_index(unvisited.size())];
  }
  VertexId best = unvisited.front();
  double best_dist = distance(g.vertex(best).state.position(), goal_position);
  for (VertexId id : unvisited) {
    const double dist = distance(g.vertex(id).state.position(), goal_position);
    if (dist < best_dist) {
      best = id;
      best_dist = dist;
    }
  }
  return best;
}

void mark_visited(ReachGraph& g, std::span<const VertexId> ids) {
  for (VertexId id : ids) g.vertex(id).visited = true;
}

PlanResponse assemble_response(const ReachGraph& g, Trajectory stub, VertexId stub_end,
                               const std::vector<EdgeId>& edges, TerminalKind terminal,
                               std::optional<VertexId> selected) {
  PlanResponse resp;
  resp.trajectory = std::move(stub);
  resp.selected = selected;
  resp.vertex_arrivals.emplace_back(resp.trajectory.end_time(), stub_end);

  for (EdgeId eid : edges) {
    const Edge& e = g.edge(eid);
    resp.chain.push_back(eid);
    resp.trajectory.append(e.trajectory);
    resp.vertex_arrivals.emplace_back(resp.trajectory.end_time(), e.to);
  }

  resp.trajectory.terminal_kind = terminal;
  if (selected) {
    for (const auto& [time, id] : resp.vertex_arrivals) {
      if (id == *selected) {
        resp.selected_arrival = time;
        break;
      }
    }
  }
  if (terminal == TerminalKind::kHomeCycle) {
    resp.trajectory.cycle_start_time =
        selected ? resp.selected_arrival : resp.trajectory.start_time;
  }
  return resp;
}

const PlanResponse& Explorer::request_trajectory(const ReachGraph& g, const PlannerState& ref,
                                                 double t) {
  if (!current_) {
    throw std::logic_error("request_trajectory: no active trajectory installed");
  }
  const PlanResponse& cur = *current_;
  const double tw = cur.trajectory.wrap_time(t);
  const PlannerState on_chain = cur.trajectory.state_at(tw);
  if (!states_match(ref, on_chain, 1e-5, 1e-5)) {
    throw std::logic_error("request_trajectory: reference is not on the active chain");
  }

  // Next chain vertex ahead of the reference.
  std::optional<std::pair<double, VertexId>> next_vertex;
  for (const auto& arrival : cur.vertex_arrivals) {
    if (arrival.first >= tw - 1e-9) {
      next_vertex = arrival;
      break;
    }
  }
  if (!next_vertex) {
    // Reference is in the periodic tail past the last arrival; it cycles back
    // to the cycle-start vertex.
    for (const auto& arrival : cur.vertex_arrivals) {
      if (std::abs(arrival.first - cur.trajectory.cycle_start_time) <= 1e-9) {
        next_vertex = {cur.trajectory.end_time(), arrival.second};
        break;
      }
    }
  }
  if (!next_vertex) {
    throw std::logic_error("request_trajectory: active chain has no vertex ahead");
  }
  const VertexId v_next = next_vertex->second;
  if (!g.vertex(v_next).in_backward_set) {
    throw std::logic_error("request_trajectory: active chain leads to a non-viable vertex");
  }

  Trajectory stub = slice_trajectory(cur.trajectory, tw, next_vertex->first);
  // Re-anchor at the request time.
  const double shift = t - stub.start_time;
  stub.start_time = t;
  for (TrajectorySample& s : stub.samples) s.t += shift;

  const auto goal_id = g.goal_id();
  if (goal_id && g.vertex(*goal_id).in_backward_set) {
    const auto path = shortest_path(g, v_next, *goal_id);
    if (!path) {
      throw std::logic_error("request_trajectory: viable goal is unreachable in-graph");
    }
    current_ = assemble_response(g, std::move(stub), v_next, *path,
                                 TerminalKind::kGoalTerminal, std::nullopt);
    return *current_;
  }

  const auto selected = select_unvisited(g, goal_position_, policy_.epsilon, rng_);
  if (!selected) {
    // Nothing new to visit: keep flying the current cycle.
    current_->fallback = true;
    return *current_;
  }

  const auto to_selected = shortest_path(g, v_next, *selected);
  const auto to_home = shortest_path(g, *selected, g.home_id());
  const auto back_out = shortest_path(g, g.home_id(), *selected);
  if (!to_selected || !to_home || !back_out) {
    throw std::logic_error("request_trajectory: backward-set closure is broken");
  }
  std::vector<EdgeId> edges = *to_selected;
  edges.insert(edges.end(), to_home->begin(), to_home->end());
  edges.insert(edges.end(), back_out->begin(), back_out->end());

  current_ = assemble_response(g, std::move(stub), v_next, edges, TerminalKind::kHomeCycle,
                               selected);
  current_->fallback = false;
  return *current_;
}

}  // namespace rfplan
