#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rfplan/reachability.hpp"
#include "rfplan/world.hpp"

namespace rfplan {

// Minimal view of a run log sufficient for plotting and metrics.
struct ParsedRunLog {
  std::string scenario;
  std::uint64_t seed = 0;
  std::optional<Environment> environment;
  double planning_height = 0.0;

  struct TimedDisk {
    double t;
    Vec2 center;
    double range;
  };
  struct TimedCircle {
    double t;
    Circle circle;
  };
  struct TimedVertex {
    double t;
    std::uint32_t id;
    Vec2 position;
  };
  struct TimedEdge {
    double t;
    std::uint32_t from;
    std::uint32_t to;
  };
  struct PathPoint {
    double t;
    Vec2 tracker;
    Vec2 reference;
    double z;
    double value;
  };

  std::vector<TimedDisk> sensed;
  std::vector<TimedCircle> discovered;
  std::vector<TimedVertex> vertices;
  std::vector<TimedEdge> edges;
  std::vector<std::pair<double, std::uint32_t>> promotions;  // (t, vertex id)
  std::vector<PathPoint> path;
  int responses = 0;
  int violations = 0;
  std::string outcome;
  std::uint64_t ticks = 0;
  double end_time = 0.0;
};

// Parses JSON-lines produced by RunLog::to_jsonl. Throws std::runtime_error
// on malformed input.
ParsedRunLog parse_runlog_jsonl(const std::string& text);

struct PlotOptions {
  int snapshots = 6;
  int heatmap_resolution = 110;
};

// Writes per-epoch world snapshots (SVG), an optional value heatmap over
// planar displacement, and metrics.json into out_dir. Returns the files
// written.
std::vector<std::string> emit_plots(const ParsedRunLog& log, const std::string& out_dir,
                                    const TebArtifact* artifact = nullptr,
                                    const PlotOptions& opts = {});

}  // namespace rfplan
