#include "rfplan/runlog.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace rfplan {

namespace {

using nlohmann::json;

double record_time(const RunRecord& r) {
  return std::visit([](const auto& rec) { return rec.t; }, r);
}

json to_json(const SensorUpdateRecord& r) {
  json discovered = json::array();
  for (const Circle& c : r.discovered) {
    discovered.push_back({c.center.x, c.center.y, c.radius});
  }
  return {{"type", "sensor_update"}, {"t", r.t},
          {"x", r.position.x},       {"y", r.position.y},
          {"range", r.range},        {"disk_recorded", r.disk_recorded},
          {"discovered", discovered}};
}

json to_json(const GraphVertexRecord& r) {
  return {{"type", "graph_vertex"}, {"t", r.t},          {"id", r.id},
          {"x", r.state.x},         {"y", r.state.y},    {"theta", r.state.theta}};
}

json to_json(const GraphEdgeRecord& r) {
  return {{"type", "graph_edge"}, {"t", r.t},       {"id", r.id},
          {"from", r.from},       {"to", r.to},     {"cost", r.cost},
          {"knowledge_stamp", r.knowledge_stamp}};
}

json to_json(const GraphPromoteRecord& r) {
  return {{"type", "graph_promote"}, {"t", r.t}, {"ids", r.ids}};
}

json to_json(const VisitRecord& r) {
  return {{"type", "visit"}, {"t", r.t}, {"ids", r.ids}};
}

json to_json(const PlanResponseRecord& r) {
  json polyline = json::array();
  for (const Vec2& p : r.polyline) polyline.push_back({p.x, p.y});
  json selected;
  if (r.selected) selected = *r.selected;
  return {{"type", "plan_response"},
          {"t", r.t},
          {"terminal", r.terminal == TerminalKind::kGoalTerminal ? "goal" : "cycle"},
          {"fallback", r.fallback},
          {"selected", selected},
          {"end_time", r.end_time},
          {"cycle_start_time", r.cycle_start_time},
          {"polyline", polyline}};
}

json to_json(const TrackerSampleRecord& r) {
  return {{"type", "tracker_sample"},
          {"t", r.t},
          {"tracker", {r.tracker.x, r.tracker.y, r.tracker.z, r.tracker.vx, r.tracker.vy,
                       r.tracker.vz}},
          {"ref", {r.reference.x, r.reference.y, r.reference.theta}},
          {"rel", {r.relative.d, r.relative.psi, r.relative.vT, r.relative.vN}},
          {"value", r.value}};
}

json to_json(const ViolationRecord& r) {
  return {{"type", "violation"}, {"t", r.t}, {"kind", r.kind}, {"detail", r.detail}};
}

json to_json(const TerminationRecord& r) {
  return {{"type", "termination"}, {"t", r.t}, {"outcome", r.outcome}, {"ticks", r.ticks}};
}

}  // namespace

void RunLog::add(RunRecord record) {
  const double t = record_time(record);
  if (t + 1e-9 < last_time_) {
    throw std::logic_error("RunLog: timestamps must be non-decreasing");
  }
  last_time_ = std::max(last_time_, t);
  if (std::holds_alternative<ViolationRecord>(record)) ++violations_;
  records_.push_back(std::move(record));
}

std::string RunLog::to_jsonl(const std::string& scenario_name, std::uint64_t seed,
                             const Environment* env, double planning_height) const {
  std::string out;
  json header = {{"schema", "rfplan-runlog"},
                 {"version", 1},
                 {"scenario", scenario_name},
                 {"seed", seed}};
  if (env) {
    header["bounds"] = {env->bounds.lo.x, env->bounds.lo.y, env->bounds.hi.x,
                        env->bounds.hi.y};
    header["home"] = {env->home.x, env->home.y, env->home.theta};
    header["goal"] = {env->goal.x, env->goal.y, env->goal.theta};
    json obstacles = json::array();
    for (const Circle& c : env->obstacles) {
      obstacles.push_back({c.center.x, c.center.y, c.radius});
    }
    header["obstacles"] = obstacles;
    header["planning_height"] = planning_height;
  }
  out += header.dump();
  out += '\n';
  for (const RunRecord& r : records_) {
    out += std::visit([](const auto& rec) { return to_json(rec).dump(); }, r);
    out += '\n';
  }
  return out;
}

void RunLog::write_jsonl(const std::string& path, const std::string& scenario_name,
                         std::uint64_t seed, const Environment* env,
                         double planning_height) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("RunLog: cannot open " + path);
  os << to_jsonl(scenario_name, seed, env, planning_height);
}

}  // namespace rfplan
