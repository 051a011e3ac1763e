#include "rfplan/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rfplan {

HjConfig::HjConfig() {
  grid.axes[0] = {0.0, 3.0, 31, false};                                // d
  grid.axes[1] = {-std::numbers::pi, std::numbers::pi, 31, true};      // psi
  grid.axes[2] = {-1.2, 1.2, 31, false};                               // vT
  grid.axes[3] = {-1.2, 1.2, 31, false};                               // vN
  z_grid.axes[0] = {-1.0, 1.0, 41, false};                             // z
  z_grid.axes[1] = {-2.0, 2.0, 41, false};                             // vz
}

RelativeParams ScenarioConfig::relative_params() const {
  RelativeParams p;
  p.v = vehicle.speed;
  p.g = vehicle.gravity;
  p.c = vehicle.turn_rate;
  p.u = vehicle.control;
  p.form = hj.dynamics;
  p.theta_samples = hj.theta_samples;
  return p;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("scenario: " + msg); };

  if (vehicle.speed <= 0.0) fail("vehicle speed must be positive");
  if (!(vehicle.turn_rate.lo < 0.0 && 0.0 < vehicle.turn_rate.hi)) {
    fail("turn-rate interval must straddle zero");
  }
  const double half_pi = std::numbers::pi / 2.0;
  if (!vehicle.control.u1.contains(half_pi)) {
    fail("pitch interval must bracket pi/2 (hover)");
  }
  if (!vehicle.control.u2.contains(0.0)) fail("roll interval must bracket 0");
  if (!vehicle.control.u3.contains(vehicle.gravity)) {
    fail("thrust interval must bracket gravity (hover infeasible)");
  }
  if (vehicle.robot_radius <= 0.0) fail("robot radius must be positive");
  if (sensing.range <= 0.0) fail("sensing range must be positive");
  if (planner.dt <= 0.0) fail("planner dt must be positive");
  if (planner.epsilon < 0.0 || planner.epsilon > 1.0) fail("epsilon must be in [0, 1]");
  if (schedule.tick <= 0.0) fail("tick length must be positive");
  if (termination.max_ticks <= 0) fail("max_ticks must be positive");

  const Box& b = environment.bounds;
  if (b.width() <= 0.0 || b.height() <= 0.0) fail("bounds must have positive area");
  for (const Circle& o : environment.obstacles) {
    if (o.radius <= 0.0) fail("obstacle radii must be positive");
  }
  if (!b.contains(environment.home.position())) fail("home outside bounds");
  if (!b.contains(environment.goal.position())) fail("goal outside bounds");
  if (environment.z_ceiling <= environment.z_floor) fail("empty vertical band");
  if (vehicle.planning_height <= environment.z_floor ||
      vehicle.planning_height >= environment.z_ceiling) {
    fail("planning height outside the vertical band");
  }

  for (const AxisSpec& a : hj.grid.axes) {
    if (a.count < 5) fail("value grid needs >= 5 nodes per axis");
  }
  for (const AxisSpec& a : hj.z_grid.axes) {
    if (a.count < 5) fail("z grid needs >= 5 nodes per axis");
  }
}

namespace {

struct Parser {
  std::string section;
  int line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("scenario line " + std::to_string(line_no) + ": " + msg);
  }

  std::vector<double> numbers(const std::string& value, std::size_t expect) const {
    std::istringstream in(value);
    std::vector<double> out;
    double x;
    while (in >> x) out.push_back(x);
    if (out.size() != expect) {
      fail("expected " + std::to_string(expect) + " numbers, got " +
           std::to_string(out.size()));
    }
    return out;
  }

  double number(const std::string& value) const { return numbers(value, 1)[0]; }

  Interval interval(const std::string& value) const {
    const auto v = numbers(value, 2);
    if (v[0] > v[1]) fail("interval lower bound exceeds upper bound");
    return {v[0], v[1]};
  }

  PlannerState pose(const std::string& value) const {
    const auto v = numbers(value, 3);
    return {v[0], v[1], wrap_angle(v[2])};
  }

  AxisSpec axis(const std::string& value, bool periodic) const {
    const auto v = numbers(value, 3);
    AxisSpec a{v[0], v[1], static_cast<int>(v[2]), periodic};
    if (a.count < 2 || a.hi <= a.lo) fail("bad axis spec");
    return a;
  }
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  Parser p;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++p.line_no;
    const auto comment = raw.find('#');
    if (comment != std::string::npos) raw = raw.substr(0, comment);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') p.fail("unterminated section header");
      p.section = trim(line.substr(1, line.size() - 2));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (p.section == "environment") {
      if (key == "bounds") {
        const auto v = p.numbers(value, 4);
        cfg.environment.bounds = {{v[0], v[1]}, {v[2], v[3]}};
      } else if (key == "home") {
        cfg.environment.home = p.pose(value);
      } else if (key == "goal") {
        cfg.environment.goal = p.pose(value);
      } else if (key == "obstacle") {
        const auto v = p.numbers(value, 3);
        cfg.environment.obstacles.push_back({{v[0], v[1]}, v[2]});
      } else if (key == "z_floor") {
        cfg.environment.z_floor = p.number(value);
      } else if (key == "z_ceiling") {
        cfg.environment.z_ceiling = p.number(value);
      } else {
        p.fail("unknown environment key '" + key + "'");
      }
    } else if (p.section == "vehicle") {
      if (key == "speed") cfg.vehicle.speed = p.number(value);
      else if (key == "gravity") cfg.vehicle.gravity = p.number(value);
      else if (key == "turn_rate") cfg.vehicle.turn_rate = p.interval(value);
      else if (key == "pitch") cfg.vehicle.control.u1 = p.interval(value);
      else if (key == "roll") cfg.vehicle.control.u2 = p.interval(value);
      else if (key == "thrust") cfg.vehicle.control.u3 = p.interval(value);
      else if (key == "robot_radius") cfg.vehicle.robot_radius = p.number(value);
      else if (key == "planning_height") cfg.vehicle.planning_height = p.number(value);
      else p.fail("unknown vehicle key '" + key + "'");
    } else if (p.section == "sensing") {
      if (key == "range") cfg.sensing.range = p.number(value);
      else if (key == "min_motion") cfg.sensing.min_motion = p.number(value);
      else p.fail("unknown sensing key '" + key + "'");
    } else if (p.section == "planner") {
      if (key == "dt") cfg.planner.dt = p.number(value);
      else if (key == "k_neighbors") cfg.planner.k_neighbors = static_cast<std::size_t>(p.number(value));
      else if (key == "heading_weight") cfg.planner.heading_weight = p.number(value);
      else if (key == "epsilon") cfg.planner.epsilon = p.number(value);
      else if (key == "t_replan") cfg.planner.t_replan = p.number(value);
      else if (key == "seed") cfg.planner.seed = static_cast<std::uint64_t>(p.number(value));
      else if (key == "safety_check_gap") cfg.planner.safety_check_gap = p.number(value);
      else p.fail("unknown planner key '" + key + "'");
    } else if (p.section == "hj") {
      if (key == "grid_d") cfg.hj.grid.axes[0] = p.axis(value, false);
      else if (key == "grid_psi") {
        const int count = static_cast<int>(p.number(value));
        cfg.hj.grid.axes[1] = {-std::numbers::pi, std::numbers::pi, count, true};
      } else if (key == "grid_vt") cfg.hj.grid.axes[2] = p.axis(value, false);
      else if (key == "grid_vn") cfg.hj.grid.axes[3] = p.axis(value, false);
      else if (key == "grid_z") cfg.hj.z_grid.axes[0] = p.axis(value, false);
      else if (key == "grid_vz") cfg.hj.z_grid.axes[1] = p.axis(value, false);
      else if (key == "residual_tol") cfg.hj.residual_tol = p.number(value);
      else if (key == "max_sweeps") cfg.hj.max_sweeps = static_cast<int>(p.number(value));
      else if (key == "theta_samples") cfg.hj.theta_samples = static_cast<int>(p.number(value));
      else if (key == "rollout_seed") cfg.hj.rollout_seed = static_cast<std::uint64_t>(p.number(value));
      else if (key == "dynamics") {
        if (value == "exact") cfg.hj.dynamics = RelativeDynamicsForm::kExact;
        else if (value == "simplified") cfg.hj.dynamics = RelativeDynamicsForm::kSimplified;
        else p.fail("dynamics must be 'exact' or 'simplified'");
      } else if (key == "cache") cfg.hj.cache_path = value;
      else p.fail("unknown hj key '" + key + "'");
    } else if (p.section == "schedule") {
      if (key == "expansion_attempts") cfg.schedule.expansion_attempts = static_cast<int>(p.number(value));
      else if (key == "consolidation_attempts") cfg.schedule.consolidation_attempts = static_cast<int>(p.number(value));
      else if (key == "tick") cfg.schedule.tick = p.number(value);
      else if (key == "permutation_seed") cfg.schedule.permutation_seed = static_cast<std::uint64_t>(p.number(value));
      else p.fail("unknown schedule key '" + key + "'");
    } else if (p.section == "termination") {
      if (key == "max_ticks") cfg.termination.max_ticks = static_cast<int>(p.number(value));
      else if (key == "goal_tolerance") cfg.termination.goal_tolerance = p.number(value);
      else p.fail("unknown termination key '" + key + "'");
    } else {
      p.fail("key outside any known section");
    }
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_scenario(buffer.str(), name);
}

}  // namespace rfplan
