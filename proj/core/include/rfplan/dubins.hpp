#pragma once

#include <array>
#include <optional>
#include <vector>

#include "rfplan/dynamics.hpp"

namespace rfplan {

enum class DubinsWord { kLSL, kRSR, kLSR, kRSL, kRLR, kLRL };

inline const char* to_string(DubinsWord w) {
  switch (w) {
    case DubinsWord::kLSL: return "LSL";
    case DubinsWord::kRSR: return "RSR";
    case DubinsWord::kLSR: return "LSR";
    case DubinsWord::kRSL: return "RSL";
    case DubinsWord::kRLR: return "RLR";
    case DubinsWord::kLRL: return "LRL";
  }
  return "?";
}

// One candidate word. Segment lengths are stored normalized by the turn
// radius (arc segments in radians, straights in units of R).
struct DubinsPath {
  DubinsWord word = DubinsWord::kLSL;
  std::array<double, 3> seg{};  // normalized lengths, all >= 0
  double radius = 0.0;

  double length() const { return (seg[0] + seg[1] + seg[2]) * radius; }
};

// All geometrically valid words connecting the two poses at turn radius R.
// LSL and RSR always exist; the list is never empty for finite inputs.
std::vector<DubinsPath> dubins_candidates(const PlannerState& from, const PlannerState& to,
                                          double R);

// Minimum-length word; deterministic tie-break by candidate order.
DubinsPath dubins_shortest(const PlannerState& from, const PlannerState& to, double R);

// Timed trajectory along a word at constant speed v, sampled no coarser than
// dt with extra samples at segment switches so every inter-sample interval
// has constant turn rate.
Trajectory dubins_trajectory(const PlannerState& from, const DubinsPath& path, double v,
                             double dt, double start_time = 0.0);

// Shortest constant-speed path between poses. Identical poses (within the
// state-matching tolerance) yield a zero-length trajectory. Throws
// std::invalid_argument for R <= 0 or non-finite poses.
std::optional<Trajectory> dubins_connect(const PlannerState& from, const PlannerState& to,
                                         double R, double v, double dt,
                                         double start_time = 0.0);

}  // namespace rfplan
