#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "rfplan/grid.hpp"
#include "rfplan/reachability.hpp"
#include "rfplan/world.hpp"

namespace rfplan {

// Malformed or infeasible scenario input; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VehicleConfig {
  double speed = 0.6;
  double gravity = 9.81;
  Interval turn_rate{-1.0, 1.0};
  TrackerControlBounds control;
  double robot_radius = 0.15;
  double planning_height = 1.5;

  double max_turn_rate() const {
    return std::max(std::abs(turn_rate.lo), std::abs(turn_rate.hi));
  }
  double turn_radius() const { return speed / max_turn_rate(); }
};

struct SensingConfig {
  double range = 3.0;
  double min_motion = 0.4;  // minimum travel between recorded scans
};

struct PlannerConfig {
  double dt = 0.01;
  std::size_t k_neighbors = 5;
  double heading_weight = 0.0;  // 0 = default to the turn radius
  double epsilon = 0.15;
  double t_replan = 2.0;
  std::uint64_t seed = 0;
  double safety_check_gap = 0.2;
};

struct HjConfig {
  GridSpec4 grid;
  ZGridSpec z_grid;
  double residual_tol = 1e-5;
  int max_sweeps = 50000;
  int theta_samples = 16;
  RelativeDynamicsForm dynamics = RelativeDynamicsForm::kExact;
  std::string cache_path;
  std::uint64_t rollout_seed = 20240901;

  HjConfig();
};

struct ScheduleConfig {
  int expansion_attempts = 10;
  int consolidation_attempts = 6;
  double tick = 0.1;
  std::uint64_t permutation_seed = 0;  // 0 = canonical order
};

struct TerminationConfig {
  int max_ticks = 20000;
  double goal_tolerance = 0.0;  // 0 = default to the tracking bound radius
};

struct ScenarioConfig {
  std::string name;
  Environment environment;
  VehicleConfig vehicle;
  SensingConfig sensing;
  PlannerConfig planner;
  HjConfig hj;
  ScheduleConfig schedule;
  TerminationConfig termination;

  RelativeParams relative_params() const;

  // Structural validation (intervals, brackets, geometry); throws ConfigError.
  void validate() const;
};

// Parses the key/value scenario format (sections in brackets, one key per
// line, repeated `obstacle` keys). Throws ConfigError with line context.
ScenarioConfig parse_scenario(const std::string& text, const std::string& name = "");
ScenarioConfig load_scenario(const std::string& path);

}  // namespace rfplan
