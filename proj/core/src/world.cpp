#include "rfplan/world.hpp"

#include <algorithm>
#include <cmath>

namespace rfplan {

namespace {

constexpr double kGeomTol = 1e-9;

struct AngularInterval {
  double lo = 0.0;
  double hi = 0.0;  // lo <= hi, may exceed 2*pi before normalization
};

}  // namespace

void KnowledgeMap::index_disk(std::size_t i) {
  if (cell_size_ <= 0.0) {
    cell_size_ = std::max(sensed_disks_[i].range, 1e-3);
    grid_nx_ = static_cast<std::size_t>(std::ceil(std::max(bounds_.width(), 1e-3) / cell_size_)) + 1;
    grid_ny_ = static_cast<std::size_t>(std::ceil(std::max(bounds_.height(), 1e-3) / cell_size_)) + 1;
    grid_.assign(grid_nx_ * grid_ny_, {});
  }
  grid_[cell_of(sensed_disks_[i].center)].push_back(static_cast<std::uint32_t>(i));
}

std::size_t KnowledgeMap::cell_of(const Vec2& p) const {
  const auto clamp_idx = [](double v, std::size_t n) {
    if (v < 0.0) return std::size_t{0};
    const auto i = static_cast<std::size_t>(v);
    return i >= n ? n - 1 : i;
  };
  const std::size_t ix = clamp_idx((p.x - bounds_.lo.x) / cell_size_, grid_nx_);
  const std::size_t iy = clamp_idx((p.y - bounds_.lo.y) / cell_size_, grid_ny_);
  return iy * grid_nx_ + ix;
}

void KnowledgeMap::sense(const Vec2& position, const Environment& env, double range, double t,
                         double min_spacing) {
  if (range <= 0.0) return;
  last_update_ = std::max(last_update_, t);

  if (env_discovered_flags_.size() != env.obstacles.size()) {
    env_discovered_flags_.assign(env.obstacles.size(), false);
  }
  for (std::size_t i = 0; i < env.obstacles.size(); ++i) {
    if (env_discovered_flags_[i]) continue;
    if (distance(env.obstacles[i].center, position) <= range + env.obstacles[i].radius) {
      env_discovered_flags_[i] = true;
      discovered_.push_back({env.obstacles[i], t, i});
    }
  }

  for (std::size_t i : disks_near(position, 0.0)) {
    const SensedDisk& d = sensed_disks_[i];
    if (std::abs(d.range - range) <= kGeomTol &&
        distance(d.center, position) <= std::max(min_spacing, kGeomTol)) {
      return;  // duplicate pose, nothing new to record
    }
  }
  sensed_disks_.push_back({position, range, t});
  max_range_ = std::max(max_range_, range);
  index_disk(sensed_disks_.size() - 1);
}

KnowledgeMap KnowledgeMap::snapshot_at(double t) const {
  KnowledgeMap snap(bounds_);
  snap.env_discovered_flags_.assign(env_discovered_flags_.size(), false);
  for (const SensedDisk& d : sensed_disks_) {
    if (d.t <= t) {
      snap.sensed_disks_.push_back(d);
      snap.max_range_ = std::max(snap.max_range_, d.range);
      snap.index_disk(snap.sensed_disks_.size() - 1);
      snap.last_update_ = std::max(snap.last_update_, d.t);
    }
  }
  for (const DiscoveredObstacle& o : discovered_) {
    if (o.t <= t) {
      snap.discovered_.push_back(o);
      if (o.env_index < snap.env_discovered_flags_.size()) {
        snap.env_discovered_flags_[o.env_index] = true;
      }
      snap.last_update_ = std::max(snap.last_update_, o.t);
    }
  }
  return snap;
}

bool KnowledgeMap::covered_by_sensed(const Vec2& p) const {
  for (std::size_t i : disks_near(p, 0.0)) {
    if (distance(sensed_disks_[i].center, p) <= sensed_disks_[i].range) return true;
  }
  return false;
}

bool KnowledgeMap::inside_discovered(const Vec2& p) const {
  for (const DiscoveredObstacle& o : discovered_) {
    if (o.circle.contains(p)) return true;
  }
  return false;
}

std::vector<std::size_t> KnowledgeMap::disks_near(const Vec2& p, double radius) const {
  std::vector<std::size_t> out;
  if (sensed_disks_.empty()) return out;
  if (cell_size_ <= 0.0) return out;
  const double reach = max_range_ + radius;
  const int ring = static_cast<int>(std::ceil(reach / cell_size_));
  const int cx = static_cast<int>((p.x - bounds_.lo.x) / cell_size_);
  const int cy = static_cast<int>((p.y - bounds_.lo.y) / cell_size_);
  for (int iy = cy - ring; iy <= cy + ring; ++iy) {
    if (iy < 0 || iy >= static_cast<int>(grid_ny_)) continue;
    for (int ix = cx - ring; ix <= cx + ring; ++ix) {
      if (ix < 0 || ix >= static_cast<int>(grid_nx_)) continue;
      for (std::uint32_t i : grid_[static_cast<std::size_t>(iy) * grid_nx_ + ix]) {
        const SensedDisk& d = sensed_disks_[i];
        if (distance(d.center, p) <= d.range + radius + kGeomTol) out.push_back(i);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CellLabel label(const Vec2& p, const KnowledgeMap& map) {
  if (map.inside_discovered(p)) return CellLabel::kOccupied;
  if (map.covered_by_sensed(p)) return CellLabel::kFree;
  return CellLabel::kUnknown;
}

namespace {

// Intersection points of two circles, if they cross transversally.
int circle_intersections(const Vec2& c1, double r1, const Vec2& c2, double r2,
                         Vec2 out[2]) {
  const Vec2 delta = c2 - c1;
  const double d = delta.norm();
  if (d <= kGeomTol) return 0;
  if (d > r1 + r2 || d < std::abs(r1 - r2)) return 0;
  const double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  const double h_sq = r1 * r1 - a * a;
  if (h_sq <= 0.0) return 0;
  const double h = std::sqrt(h_sq);
  const Vec2 dir{delta.x / d, delta.y / d};
  const Vec2 base = c1 + a * dir;
  const Vec2 perp{-dir.y, dir.x};
  out[0] = base + h * perp;
  out[1] = base - h * perp;
  return 2;
}

}  // namespace

bool disc_in_disk_union(const Vec2& center, double rho, std::span<const SensedDisk> disks) {
  if (rho <= 0.0) {
    for (const SensedDisk& d : disks) {
      if (distance(d.center, center) <= d.range) return true;
    }
    return false;
  }

  bool center_covered = false;
  for (const SensedDisk& d : disks) {
    const double dist = distance(d.center, center);
    if (dist + rho <= d.range + kGeomTol) return true;  // fully inside one disk
    if (dist <= d.range) center_covered = true;
  }
  if (!center_covered) return false;

  // Angular arcs of the boundary circle covered by each disk.
  std::vector<AngularInterval> arcs;
  for (const SensedDisk& d : disks) {
    const double dist = distance(d.center, center);
    if (dist <= kGeomTol) continue;             // concentric, cannot reach the boundary
    if (dist >= d.range + rho) continue;        // no overlap with the boundary
    if (dist + d.range <= rho) continue;        // disk strictly inside the disc
    const double cos_half =
        (rho * rho + dist * dist - d.range * d.range) / (2.0 * rho * dist);
    if (cos_half >= 1.0) continue;
    const double half = std::acos(std::max(-1.0, cos_half));
    const double mid = std::atan2(d.center.y - center.y, d.center.x - center.x);
    arcs.push_back({mid - half, mid + half});
  }
  if (arcs.empty()) return false;

  // Normalize to start in [0, 2*pi) and sweep for full coverage.
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (AngularInterval& a : arcs) {
    const double span = a.hi - a.lo;
    a.lo = wrap_angle_positive(a.lo);
    a.hi = a.lo + span;
  }
  std::sort(arcs.begin(), arcs.end(),
            [](const AngularInterval& a, const AngularInterval& b) { return a.lo < b.lo; });

  // Unroll the first arc across the wrap and sweep.
  double reach = arcs.front().lo;
  const double target = arcs.front().lo + two_pi;
  for (std::size_t pass = 0; pass < 2 && reach < target - kGeomTol; ++pass) {
    const double offset = pass * two_pi;
    for (const AngularInterval& a : arcs) {
      const double lo = a.lo + offset;
      const double hi = a.hi + offset;
      if (lo > reach + kGeomTol) break;
      reach = std::max(reach, hi);
      if (reach >= target - kGeomTol) break;
    }
  }
  if (reach < target - kGeomTol) return false;

  // Interior holes: a hole inside the disc has a corner where two disk
  // boundaries cross; such a corner is locally covered only if it lies
  // strictly inside some other disk.
  for (std::size_t i = 0; i < disks.size(); ++i) {
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      Vec2 pts[2];
      const int n = circle_intersections(disks[i].center, disks[i].range, disks[j].center,
                                         disks[j].range, pts);
      for (int k = 0; k < n; ++k) {
        if (distance(pts[k], center) >= rho - kGeomTol) continue;
        bool covered = false;
        for (std::size_t m = 0; m < disks.size(); ++m) {
          if (m == i || m == j) continue;
          if (distance(disks[m].center, pts[k]) < disks[m].range - kGeomTol) {
            covered = true;
            break;
          }
        }
        if (!covered) return false;
      }
    }
  }
  return true;
}

namespace {

bool footprint_clear_of_obstacles(const Vec2& pos, double radius, const KnowledgeMap& map) {
  if (!map.bounds().contains(pos, radius)) return false;
  for (const DiscoveredObstacle& o : map.discovered_obstacles()) {
    if (distance(o.circle.center, pos) <= o.circle.radius + radius) return false;
  }
  return true;
}

}  // namespace

bool footprint_free(const PlannerState& p, const RobustFootprint& fp, const KnowledgeMap& map) {
  const Vec2 pos = p.position();
  if (!footprint_clear_of_obstacles(pos, fp.radius, map)) return false;
  const auto near = map.disks_near(pos, fp.radius);
  std::vector<SensedDisk> local;
  local.reserve(near.size());
  for (std::size_t i : near) local.push_back(map.sensed_disks()[i]);
  return disc_in_disk_union(pos, fp.radius, local);
}

bool footprint_clear_of_known(const PlannerState& p, const RobustFootprint& fp,
                              const KnowledgeMap& map) {
  return footprint_clear_of_obstacles(p.position(), fp.radius, map);
}

namespace {

template <typename CheckFn>
bool swept_check(const Trajectory& xi, const RobustFootprint& fp, double v, double max_gap,
                 CheckFn&& check) {
  const auto& samples = xi.samples;
  if (samples.empty()) return true;
  if (samples.size() == 1) return check(samples[0].state, fp.radius);

  // Pick the subset of samples to check: greedy, gaps at most max_gap.
  std::vector<std::size_t> picks{0};
  if (max_gap <= 0.0) {
    for (std::size_t i = 1; i < samples.size(); ++i) picks.push_back(i);
  } else {
    std::size_t last = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
      const bool must_take = (i + 1 == samples.size()) ||
                             (samples[i + 1].t - samples[last].t > max_gap);
      if (must_take) {
        picks.push_back(i);
        last = i;
      }
    }
    if (picks.back() != samples.size() - 1) picks.push_back(samples.size() - 1);
  }

  for (std::size_t k = 0; k < picks.size(); ++k) {
    const double gap_before = k == 0 ? 0.0 : samples[picks[k]].t - samples[picks[k - 1]].t;
    const double gap_after =
        k + 1 == picks.size() ? 0.0 : samples[picks[k + 1]].t - samples[picks[k]].t;
    const double inflation = 0.5 * v * std::max(gap_before, gap_after);
    if (!check(samples[picks[k]].state, fp.radius + inflation)) return false;
  }
  return true;
}

}  // namespace

bool trajectory_safe(const Trajectory& xi, const RobustFootprint& fp, const KnowledgeMap& map,
                     double v, double max_gap) {
  return swept_check(xi, fp, v, max_gap, [&](const PlannerState& s, double radius) {
    return footprint_free(s, RobustFootprint{radius}, map);
  });
}

bool trajectory_clear_of_known(const Trajectory& xi, const RobustFootprint& fp,
                               const KnowledgeMap& map, double v, double max_gap) {
  return swept_check(xi, fp, v, max_gap, [&](const PlannerState& s, double radius) {
    return footprint_clear_of_known(s, RobustFootprint{radius}, map);
  });
}

}  // namespace rfplan
