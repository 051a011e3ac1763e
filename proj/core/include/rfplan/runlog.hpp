#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rfplan/dynamics.hpp"
#include "rfplan/geometry.hpp"
#include "rfplan/reachability.hpp"
#include "rfplan/world.hpp"

namespace rfplan {

struct SensorUpdateRecord {
  double t = 0.0;
  Vec2 position;
  double range = 0.0;
  bool disk_recorded = false;
  std::vector<Circle> discovered;  // obstacles discovered by this update
};

struct GraphVertexRecord {
  double t = 0.0;
  std::uint32_t id = 0;
  PlannerState state;
};

struct GraphEdgeRecord {
  double t = 0.0;
  std::uint32_t id = 0;
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  double cost = 0.0;
  double knowledge_stamp = 0.0;
};

struct GraphPromoteRecord {
  double t = 0.0;
  std::vector<std::uint32_t> ids;
};

struct VisitRecord {
  double t = 0.0;
  std::vector<std::uint32_t> ids;
};

struct PlanResponseRecord {
  double t = 0.0;
  TerminalKind terminal = TerminalKind::kHomeCycle;
  bool fallback = false;
  std::optional<std::uint32_t> selected;
  double end_time = 0.0;
  double cycle_start_time = 0.0;
  std::vector<Vec2> polyline;  // decimated reference path for plots
};

struct TrackerSampleRecord {
  double t = 0.0;
  TrackerState tracker;
  PlannerState reference;
  RelativeState relative;
  double value = 0.0;  // interpolated game value at the relative state
};

struct ViolationRecord {
  double t = 0.0;
  std::string kind;
  std::string detail;
};

struct TerminationRecord {
  double t = 0.0;
  std::string outcome;
  std::uint64_t ticks = 0;
};

using RunRecord =
    std::variant<SensorUpdateRecord, GraphVertexRecord, GraphEdgeRecord, GraphPromoteRecord,
                 VisitRecord, PlanResponseRecord, TrackerSampleRecord, ViolationRecord,
                 TerminationRecord>;

// Append-only, time-ordered record stream for one run. Serialized as JSON
// lines with a schema header; no wall-clock metadata so identical runs are
// byte-identical.
class RunLog {
 public:
  void add(RunRecord record);

  const std::vector<RunRecord>& records() const { return records_; }
  int violation_count() const { return violations_; }
  double last_time() const { return last_time_; }

  std::string to_jsonl(const std::string& scenario_name, std::uint64_t seed,
                       const Environment* env = nullptr, double planning_height = 0.0) const;
  void write_jsonl(const std::string& path, const std::string& scenario_name,
                   std::uint64_t seed, const Environment* env = nullptr,
                   double planning_height = 0.0) const;

 private:
  std::vector<RunRecord> records_;
  int violations_ = 0;
  double last_time_ = 0.0;
};

}  // namespace rfplan
