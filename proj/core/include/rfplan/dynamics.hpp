#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "rfplan/geometry.hpp"

namespace rfplan {

// State-matching tolerances used for cycle closure, duplicate suppression and
// edge endpoint checks.
inline constexpr double kPositionMatchTol = 1e-6;  // [m]
inline constexpr double kHeadingMatchTol = 1e-6;   // [rad]

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool valid() const { return lo <= hi; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  double width() const { return hi - lo; }
};

// Planar reference vehicle: constant-speed car with bounded turn rate.
struct PlannerState {
  double x = 0.0;      // [m]
  double y = 0.0;      // [m]
  double theta = 0.0;  // [rad], kept in (-pi, pi]

  Vec2 position() const { return {x, y}; }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(theta);
  }
};

struct PlannerControl {
  double c = 0.0;  // turning rate [rad/s]
};

inline bool states_match(const PlannerState& a, const PlannerState& b,
                         double pos_tol = kPositionMatchTol,
                         double heading_tol = kHeadingMatchTol) {
  return distance(a.position(), b.position()) <= pos_tol &&
         angular_distance(a.theta, b.theta) <= heading_tol;
}

// Full vehicle: planar double integrator with attitude-driven acceleration
// plus a vertical axis.
struct TrackerState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;

  Vec2 position() const { return {x, y}; }
  Vec2 velocity() const { return {vx, vy}; }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) &&
           std::isfinite(vx) && std::isfinite(vy) && std::isfinite(vz);
  }
};

struct TrackerControl {
  double u1 = 0.0;  // pitch [rad]
  double u2 = 0.0;  // roll [rad]
  double u3 = 0.0;  // thrust acceleration [m/s^2]
};

struct TrackerControlBounds {
  Interval u1;  // must bracket pi/2 (hover pitch)
  Interval u2;  // must bracket 0
  Interval u3;  // must bracket g
};

enum class TerminalKind { kGoalTerminal, kHomeCycle };

struct TrajectorySample {
  double t = 0.0;
  PlannerState state;
  PlannerControl control;  // control applied on [t, next sample time)
};

// A timed reference path. For kHomeCycle trajectories the tail starting at
// cycle_start_time is periodic: the final sample state matches the state at
// cycle_start_time, and queries past the end wrap back into the cycle.
struct Trajectory {
  double start_time = 0.0;
  std::vector<TrajectorySample> samples;
  TerminalKind terminal_kind = TerminalKind::kGoalTerminal;
  double cycle_start_time = 0.0;  // used when terminal_kind == kHomeCycle

  bool empty() const { return samples.empty(); }
  double end_time() const { return samples.empty() ? start_time : samples.back().t; }
  double duration() const { return end_time() - start_time; }
  double cycle_period() const { return end_time() - cycle_start_time; }

  const PlannerState& front_state() const { return samples.front().state; }
  const PlannerState& back_state() const { return samples.back().state; }

  // Maps a query time into the sampled range, wrapping periodically past the
  // end for home-cycle trajectories.
  double wrap_time(double t) const;

  // Interpolated state at time t (linear in position, shortest-arc in
  // heading). t is wrapped first.
  PlannerState state_at(double t) const;

  // Control in effect at time t (piecewise constant). t is wrapped first.
  PlannerControl control_at(double t) const;

  // Appends another trajectory whose first state continues this one. Times of
  // `tail` are shifted so that its start coincides with this end time.
  void append(const Trajectory& tail);
};

// Piecewise-constant control signal over relative time [0, inf): value of
// knot i applies on [knots[i].first, knots[i+1].first).
struct PiecewiseConstantControl {
  std::vector<std::pair<double, double>> knots;  // (time offset, turn rate)

  static PiecewiseConstantControl constant(double c) { return {{{0.0, c}}}; }
  double at(double t) const;
};

// Portion of a trajectory between two times (start <= t0 <= t1 <= end), with
// interpolated endpoint samples and all interior samples preserved.
Trajectory slice_trajectory(const Trajectory& traj, double t0, double t1);

// Right-hand side of the reference model: (v cos th, v sin th, c).
std::array<double, 3> planner_derivative(const PlannerState& p, const PlannerControl& c,
                                         double v);

// Right-hand side of the vehicle model:
// (vx, g cos u1, vy, -g sin u2, vz, u3 - g).
std::array<double, 6> tracker_derivative(const TrackerState& s, const TrackerControl& u,
                                         double g);

// Fixed-step 4th-order integration of the reference model under a
// piecewise-constant control signal. Steps are aligned to control switch
// times; sample spacing never exceeds dt and the final sample lands exactly
// at start_time + horizon. Throws std::invalid_argument on non-finite input,
// dt <= 0 or horizon < 0.
Trajectory integrate_planner(const PlannerState& p0, const PiecewiseConstantControl& ctrl,
                             double dt, double horizon, double v, double start_time = 0.0);

// One RK4 step of the vehicle model with zero-order-hold control.
TrackerState integrate_tracker_step(const TrackerState& s, const TrackerControl& u,
                                    double g, double h);

}  // namespace rfplan
