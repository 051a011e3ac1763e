#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rfplan/meta_graph.hpp"
#include "rfplan/rng.hpp"

namespace rfplan {

struct ExplorationPolicy {
  double epsilon = 0.15;  // probability of a uniform pick instead of greedy
  std::uint64_t seed = 0;
};

// A served trajectory together with the graph chain that backs it.
struct PlanResponse {
  Trajectory trajectory;
  std::vector<EdgeId> chain;  // edges traversed in order (first may be partial)
  std::vector<std::pair<double, VertexId>> vertex_arrivals;  // ascending times
  std::optional<VertexId> selected;  // unvisited vertex routed through
  double selected_arrival = 0.0;
  bool fallback = false;  // previous trajectory reissued unchanged
};

// Epsilon-greedy pick over unvisited backward-set vertices: with probability
// 1-epsilon the one closest to the goal position (ties to the smaller id),
// otherwise uniform. nullopt when everything is visited.
std::optional<VertexId> select_unvisited(const ReachGraph& g, const Vec2& goal_position,
                                         double epsilon, Rng& rng);

void mark_visited(ReachGraph& g, std::span<const VertexId> ids);

// Serves trajectory requests against a single active response: each request
// continues from the reference point on the current chain, routes through an
// unvisited viable vertex and closes a home cycle, or heads straight to the
// goal once the goal is viable.
class Explorer {
 public:
  Explorer(const ExplorationPolicy& policy, const Vec2& goal_position)
      : policy_(policy), goal_position_(goal_position), rng_(policy.seed) {}

  bool has_current() const { return current_.has_value(); }
  const PlanResponse& current() const { return *current_; }

  // Installs the initial viable trajectory (e.g. the home loop).
  void set_initial(PlanResponse response) { current_ = std::move(response); }

  // Produces the next response for a reference at state `ref`, time t, and
  // installs it as current. Throws std::logic_error if ref does not lie on
  // the active chain: that is a framework-invariant violation.
  const PlanResponse& request_trajectory(const ReachGraph& g, const PlannerState& ref,
                                         double t);

 private:
  ExplorationPolicy policy_;
  Vec2 goal_position_;
  Rng rng_;
  std::optional<PlanResponse> current_;
};

// Assembles a response from a partial leading piece plus whole graph edges.
// Exposed for the simulator's initial home loop and for tests.
PlanResponse assemble_response(const ReachGraph& g, Trajectory stub, VertexId stub_end,
                               const std::vector<EdgeId>& edges, TerminalKind terminal,
                               std::optional<VertexId> selected);

}  // namespace rfplan
