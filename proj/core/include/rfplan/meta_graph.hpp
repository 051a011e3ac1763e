#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rfplan/dubins.hpp"
#include "rfplan/dynamics.hpp"
#include "rfplan/rng.hpp"
#include "rfplan/world.hpp"

namespace rfplan {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

struct Vertex {
  VertexId id = 0;
  PlannerState state;
  bool in_backward_set = false;  // can reach home or goal through stored edges
  bool visited = false;          // physically traversed by the executed reference
  double cost_from_home = kInfiniteCost;
  double cost_to_home = kInfiniteCost;
  double cost_to_goal = kInfiniteCost;
};

struct Edge {
  EdgeId id = 0;
  VertexId from = 0;
  VertexId to = 0;
  Trajectory trajectory;  // starts at `from`'s state, ends at `to`'s state
  double cost = 0.0;      // duration [s]
  double knowledge_stamp = 0.0;
};

// Connection machinery parameters, fixed at construction.
struct GraphParams {
  double turn_radius = 1.0;      // dubins radius = v / max turn rate
  double speed = 1.0;            // reference speed v
  double sample_dt = 0.01;       // trajectory sample spacing
  double heading_weight = 1.0;   // alpha in the (x, y, alpha*theta) metric
  double safety_check_gap = 0.0; // max time between swept-safety checks
};

// Directed graph of safely reachable reference states. Vertices and edges
// are append-only: the graph only grows and backward-set flags are never
// cleared. Single writer; readers take snapshots by copy.
class ReachGraph {
 public:
  ReachGraph(const PlannerState& home, const GraphParams& params);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const GraphParams& params() const { return params_; }
  VertexId home_id() const { return home_id_; }
  std::optional<VertexId> goal_id() const { return goal_id_; }

  Vertex& vertex(VertexId id) { return vertices_[id]; }
  const Vertex& vertex(VertexId id) const { return vertices_[id]; }
  const Edge& edge(EdgeId id) const { return edges_[id]; }

  const std::vector<EdgeId>& out_edges(VertexId id) const { return out_edges_[id]; }
  const std::vector<EdgeId>& in_edges(VertexId id) const { return in_edges_[id]; }

  // Weighted nearest-neighbor query over vertex states; ties break by id.
  std::vector<VertexId> k_nearest(const PlannerState& state, std::size_t k,
                                  bool backward_set_only = false) const;

  // True iff a vertex within the state-matching tolerance exists.
  std::optional<VertexId> find_matching(const PlannerState& state) const;

  VertexId add_vertex(const PlannerState& state);
  EdgeId add_edge(VertexId from, VertexId to, Trajectory trajectory, double knowledge_stamp);

  // Marks the vertex viable and propagates the flag to every vertex that can
  // reach it over stored edges. Returns newly flagged ids.
  std::vector<VertexId> promote_to_backward_set(VertexId id);

  // Registers the goal vertex: it joins the backward set by definition and
  // seeds cost_to_goal.
  void set_goal(VertexId id);

  double weighted_distance(const PlannerState& a, const PlannerState& b) const;

  // Structural invariant check; returns human-readable violations (empty if
  // healthy). Intended for the simulation harness and tests.
  std::vector<std::string> check_invariants() const;

 private:
  friend void update_costs(ReachGraph& g, const std::vector<EdgeId>& changed);

  GraphParams params_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_edges_;
  std::vector<std::vector<EdgeId>> in_edges_;
  VertexId home_id_ = 0;
  std::optional<VertexId> goal_id_;
};

// Uniform candidate drawn over the map bounds with heading uniform in
// (-pi, pi]; returned only if the robust footprint is entirely FREE.
std::optional<PlannerState> sample_candidate(const KnowledgeMap& map,
                                             const RobustFootprint& fp, Rng& rng);

// Tries to connect p_new from one of its k nearest vertices with a safe
// trajectory; on success adds vertex + edge and returns true. Candidates
// within the state-matching tolerance of an existing vertex are rejected.
bool outbound_expand(ReachGraph& g, const PlannerState& p_new, const KnowledgeMap& map,
                     const RobustFootprint& fp, std::size_t k, double t);

// Tries to connect vertex v_id to one of the k nearest backward-set vertices
// with a safe trajectory; on success promotes it (and its ancestors) and
// refreshes costs. Returns true iff v_id was promoted.
bool inbound_consolidate(ReachGraph& g, VertexId v_id, const KnowledgeMap& map,
                         const RobustFootprint& fp, std::size_t k, double t);

// Minimum-duration directed path as an ordered edge list; empty list when
// from == to, nullopt when unreachable. Deterministic tie-break by vertex id.
std::optional<std::vector<EdgeId>> shortest_path(const ReachGraph& g, VertexId from,
                                                 VertexId to);

// Restores the three cost fields to exact shortest-path values after edge
// insertions (incremental label-correcting relaxation).
void update_costs(ReachGraph& g, const std::vector<EdgeId>& changed);

}  // namespace rfplan
