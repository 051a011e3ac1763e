#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rfplan/dynamics.hpp"
#include "rfplan/geometry.hpp"

namespace rfplan {

// Static planar environment: circular obstacles (spheres sliced at the
// planning height) inside an axis-aligned boundary. Leaving the boundary is
// treated as unsafe.
struct Environment {
  Box bounds;
  std::vector<Circle> obstacles;
  PlannerState home;
  PlannerState goal;
  double z_floor = 0.0;
  double z_ceiling = 0.0;

  bool inside_any_obstacle(const Vec2& p) const {
    for (const Circle& o : obstacles) {
      if (o.contains(p)) return true;
    }
    return false;
  }
};

enum class CellLabel { kFree, kOccupied, kUnknown };

struct RobustFootprint {
  double radius = 0.0;  // physical radius inflated by the tracking bound
};

struct SensedDisk {
  Vec2 center;
  double range = 0.0;
  double t = 0.0;
};

struct DiscoveredObstacle {
  Circle circle;
  double t = 0.0;
  std::size_t env_index = 0;
};

// Incrementally built world knowledge: a union of exactly-sensed disks and
// the obstacles discovered so far. Append-only, so the knowledge at any past
// time is the prefix of entries stamped at or before it.
class KnowledgeMap {
 public:
  KnowledgeMap() = default;
  explicit KnowledgeMap(const Box& bounds) : bounds_(bounds) {}

  const Box& bounds() const { return bounds_; }
  const std::vector<SensedDisk>& sensed_disks() const { return sensed_disks_; }
  const std::vector<DiscoveredObstacle>& discovered_obstacles() const { return discovered_; }
  double time_of_last_update() const { return last_update_; }

  // Records one omnidirectional measurement. Obstacles intersecting the
  // sensing disk are discovered in full. The disk itself is appended unless
  // an earlier disk of equal range lies within min_spacing of the position
  // (repeated identical poses are therefore no-ops).
  void sense(const Vec2& position, const Environment& env, double range, double t,
             double min_spacing = 0.0);

  // Knowledge as of time t (prefix of this map's updates).
  KnowledgeMap snapshot_at(double t) const;

  bool covered_by_sensed(const Vec2& p) const;
  bool inside_discovered(const Vec2& p) const;

  // Indices of sensed disks whose disk could intersect a disc of `radius`
  // at p. Superset of the exact intersecting set.
  std::vector<std::size_t> disks_near(const Vec2& p, double radius) const;

 private:
  void index_disk(std::size_t i);
  std::size_t cell_of(const Vec2& p) const;

  Box bounds_;
  std::vector<SensedDisk> sensed_disks_;
  std::vector<DiscoveredObstacle> discovered_;
  std::vector<bool> env_discovered_flags_;
  double last_update_ = 0.0;
  double max_range_ = 0.0;

  // Uniform-grid index over disk centers; cell size fixed by the first
  // recorded range.
  double cell_size_ = 0.0;
  std::size_t grid_nx_ = 0, grid_ny_ = 0;
  std::vector<std::vector<std::uint32_t>> grid_;
};

CellLabel label(const Vec2& p, const KnowledgeMap& map);

// Exact containment of the disc (center, rho) in the union of closed disks:
// the center must be covered, the boundary circle must be covered by merged
// angular arcs, and every crossing point of two disk boundaries strictly
// inside the disc must lie strictly inside a third disk (otherwise a locally
// uncovered wedge exists there).
bool disc_in_disk_union(const Vec2& center, double rho, std::span<const SensedDisk> disks);

// True iff the robust footprint at p is entirely known FREE: inside bounds,
// contained in the sensed union, and disjoint from every discovered obstacle.
bool footprint_free(const PlannerState& p, const RobustFootprint& fp, const KnowledgeMap& map);

// Baseline variant that treats UNKNOWN as free: only boundary and discovered
// obstacles constrain.
bool footprint_clear_of_known(const PlannerState& p, const RobustFootprint& fp,
                              const KnowledgeMap& map);

// Swept-path safety: footprint_free along the trajectory, checked at samples
// spaced at most max_gap apart in time with each checked footprint inflated
// by v * gap / 2 to cover inter-sample motion. max_gap <= 0 checks every
// sample.
bool trajectory_safe(const Trajectory& xi, const RobustFootprint& fp, const KnowledgeMap& map,
                     double v, double max_gap = 0.0);

bool trajectory_clear_of_known(const Trajectory& xi, const RobustFootprint& fp,
                               const KnowledgeMap& map, double v, double max_gap = 0.0);

}  // namespace rfplan
