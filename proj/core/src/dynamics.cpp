#include "rfplan/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfplan {

double Trajectory::wrap_time(double t) const {
  if (samples.empty()) return t;
  if (t <= start_time) return start_time;
  const double te = end_time();
  if (t <= te) return t;
  if (terminal_kind != TerminalKind::kHomeCycle) return te;
  const double period = cycle_period();
  if (period <= 0.0) return te;
  double dt = std::fmod(t - cycle_start_time, period);
  return cycle_start_time + dt;
}

namespace {

// Index of the last sample with time <= t.
std::size_t sample_index_at(const std::vector<TrajectorySample>& samples, double t) {
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double value, const TrajectorySample& s) { return value < s.t; });
  if (it == samples.begin()) return 0;
  return static_cast<std::size_t>(std::distance(samples.begin(), it)) - 1;
}

}  // namespace

PlannerState Trajectory::state_at(double t) const {
  if (samples.empty()) return PlannerState{};
  t = wrap_time(t);
  const std::size_t i = sample_index_at(samples, t);
  if (i + 1 >= samples.size()) return samples.back().state;
  const TrajectorySample& a = samples[i];
  const TrajectorySample& b = samples[i + 1];
  const double span = b.t - a.t;
  if (span <= 0.0) return a.state;
  const double w = (t - a.t) / span;
  PlannerState out;
  out.x = a.state.x + w * (b.state.x - a.state.x);
  out.y = a.state.y + w * (b.state.y - a.state.y);
  out.theta = wrap_angle(a.state.theta + w * wrap_angle(b.state.theta - a.state.theta));
  return out;
}

PlannerControl Trajectory::control_at(double t) const {
  if (samples.empty()) return PlannerControl{};
  t = wrap_time(t);
  return samples[sample_index_at(samples, t)].control;
}

void Trajectory::append(const Trajectory& tail) {
  if (tail.samples.empty()) return;
  if (samples.empty()) {
    *this = tail;
    return;
  }
  const double shift = end_time() - tail.start_time;
  // The joined sample replaces our last one so controls hand over cleanly.
  samples.pop_back();
  for (const TrajectorySample& s : tail.samples) {
    TrajectorySample shifted = s;
    shifted.t += shift;
    samples.push_back(shifted);
  }
}

Trajectory slice_trajectory(const Trajectory& traj, double t0, double t1) {
  Trajectory out;
  out.start_time = t0;
  if (traj.samples.empty()) return out;
  out.samples.push_back({t0, traj.state_at(t0), traj.control_at(t0)});
  for (const TrajectorySample& s : traj.samples) {
    if (s.t > t0 + 1e-12 && s.t < t1 - 1e-12) out.samples.push_back(s);
  }
  if (t1 > t0 + 1e-12) {
    out.samples.push_back({t1, traj.state_at(t1), traj.control_at(t1)});
  }
  return out;
}

double PiecewiseConstantControl::at(double t) const {
  if (knots.empty()) return 0.0;
  double value = knots.front().second;
  for (const auto& [time, c] : knots) {
    if (time <= t) value = c;
    else break;
  }
  return value;
}

std::array<double, 3> planner_derivative(const PlannerState& p, const PlannerControl& c,
                                         double v) {
  return {v * std::cos(p.theta), v * std::sin(p.theta), c.c};
}

std::array<double, 6> tracker_derivative(const TrackerState& s, const TrackerControl& u,
                                         double g) {
  return {s.vx, g * std::cos(u.u1), s.vy, -g * std::sin(u.u2), s.vz, u.u3 - g};
}

namespace {

PlannerState rk4_planner_step(const PlannerState& p, double c, double v, double h) {
  auto deriv = [v, c](const PlannerState& s) {
    return planner_derivative(s, PlannerControl{c}, v);
  };
  auto advance = [](const PlannerState& s, const std::array<double, 3>& k, double scale) {
    return PlannerState{s.x + scale * k[0], s.y + scale * k[1], s.theta + scale * k[2]};
  };
  const auto k1 = deriv(p);
  const auto k2 = deriv(advance(p, k1, h / 2.0));
  const auto k3 = deriv(advance(p, k2, h / 2.0));
  const auto k4 = deriv(advance(p, k3, h));
  PlannerState out;
  out.x = p.x + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
  out.y = p.y + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  out.theta = wrap_angle(p.theta + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]));
  return out;
}

}  // namespace

Trajectory integrate_planner(const PlannerState& p0, const PiecewiseConstantControl& ctrl,
                             double dt, double horizon, double v, double start_time) {
  if (!p0.finite() || !std::isfinite(v) || !std::isfinite(horizon) || !std::isfinite(dt)) {
    throw std::invalid_argument("integrate_planner: non-finite input");
  }
  if (dt <= 0.0) throw std::invalid_argument("integrate_planner: dt must be positive");
  if (horizon < 0.0) throw std::invalid_argument("integrate_planner: negative horizon");
  for (const auto& [t, c] : ctrl.knots) {
    if (!std::isfinite(t) || !std::isfinite(c)) {
      throw std::invalid_argument("integrate_planner: non-finite control knot");
    }
  }

  Trajectory traj;
  traj.start_time = start_time;
  PlannerState p = p0;
  p.theta = wrap_angle(p.theta);
  traj.samples.push_back({start_time, p, PlannerControl{ctrl.at(0.0)}});
  if (horizon == 0.0) return traj;

  // Breakpoints: control switches plus the horizon end, each subdivided so no
  // step exceeds dt.
  std::vector<double> breaks;
  for (const auto& [t, c] : ctrl.knots) {
    if (t > 0.0 && t < horizon) breaks.push_back(t);
  }
  breaks.push_back(horizon);
  std::sort(breaks.begin(), breaks.end());

  double t_rel = 0.0;
  for (double b : breaks) {
    const double span = b - t_rel;
    if (span <= 0.0) continue;
    const int steps = std::max(1, static_cast<int>(std::ceil(span / dt - 1e-12)));
    const double h = span / steps;
    const double c = ctrl.at(t_rel);
    for (int i = 0; i < steps; ++i) {
      p = rk4_planner_step(p, c, v, h);
      const double t_next = (i + 1 == steps) ? b : t_rel + (i + 1) * h;
      traj.samples.push_back({start_time + t_next, p, PlannerControl{ctrl.at(t_next)}});
    }
    t_rel = b;
  }
  return traj;
}

TrackerState integrate_tracker_step(const TrackerState& s, const TrackerControl& u,
                                    double g, double h) {
  auto advance = [](const TrackerState& st, const std::array<double, 6>& k, double scale) {
    return TrackerState{st.x + scale * k[0],  st.y + scale * k[2], st.z + scale * k[4],
                        st.vx + scale * k[1], st.vy + scale * k[3], st.vz + scale * k[5]};
  };
  const auto k1 = tracker_derivative(s, u, g);
  const auto k2 = tracker_derivative(advance(s, k1, h / 2.0), u, g);
  const auto k3 = tracker_derivative(advance(s, k2, h / 2.0), u, g);
  const auto k4 = tracker_derivative(advance(s, k3, h), u, g);
  TrackerState out;
  out.x = s.x + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
  out.vx = s.vx + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  out.y = s.y + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
  out.vy = s.vy + h / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]);
  out.z = s.z + h / 6.0 * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4]);
  out.vz = s.vz + h / 6.0 * (k1[5] + 2.0 * k2[5] + 2.0 * k3[5] + k4[5]);
  return out;
}

}  // namespace rfplan
