#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rfplan/dynamics.hpp"
#include "rfplan/rng.hpp"

using namespace rfplan;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(0.5) == doctest::Approx(0.5));
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const double a = rng.uniform(-50.0, 50.0);
    const double w = wrap_angle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(std::abs(std::sin(w) - std::sin(a)) < 1e-9);
    CHECK(std::abs(std::cos(w) - std::cos(a)) < 1e-9);
  }
}

TEST_CASE("planner derivative matches the constant-speed car model") {
  const auto d1 = planner_derivative({0, 0, 0}, {0.0}, 1.0);
  CHECK(d1[0] == doctest::Approx(1.0));
  CHECK(d1[1] == doctest::Approx(0.0));
  CHECK(d1[2] == doctest::Approx(0.0));

  const auto d2 = planner_derivative({0, 0, kPi / 2}, {0.0}, 1.0);
  CHECK(d2[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d2[1] == doctest::Approx(1.0));

  const auto d3 = planner_derivative({0, 0, 0}, {0.5}, 2.0);
  CHECK(d3[0] == doctest::Approx(2.0));
  CHECK(d3[1] == doctest::Approx(0.0));
  CHECK(d3[2] == doctest::Approx(0.5));
}

TEST_CASE("planar speed of the planner derivative is exactly v") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    PlannerState p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-kPi, kPi)};
    const double v = rng.uniform(0.1, 3.0);
    const auto d = planner_derivative(p, {rng.uniform(-2, 2)}, v);
    CHECK(std::hypot(d[0], d[1]) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("integrate_planner straight line") {
  const auto traj =
      integrate_planner({0, 0, 0}, PiecewiseConstantControl::constant(0.0), 0.01, 5.0, 1.0);
  const PlannerState end = traj.back_state();
  CHECK(std::abs(end.x - 5.0) < 1e-9);
  CHECK(std::abs(end.y) < 1e-9);
  CHECK(std::abs(end.theta) < 1e-9);
  CHECK(traj.end_time() == doctest::Approx(5.0));
  // spacing <= dt
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    CHECK(traj.samples[i].t - traj.samples[i - 1].t <= 0.01 + 1e-12);
  }
}

TEST_CASE("integrate_planner constant turn closes a circle") {
  const double omega = 0.7;
  const double v = 1.3;
  const double period = 2.0 * kPi / omega;
  const auto traj = integrate_planner({0, 0, 0}, PiecewiseConstantControl::constant(omega),
                                      0.01, period, v);
  const PlannerState end = traj.back_state();
  CHECK(std::abs(end.x) < 1e-6);
  CHECK(std::abs(end.y) < 1e-6);
  CHECK(angular_distance(end.theta, 0.0) < 1e-6);

  // radius v/omega: every sample equidistant from the circle center
  const double radius = v / omega;
  for (const auto& s : traj.samples) {
    CHECK(std::abs(distance(s.state.position(), {0.0, radius}) - radius) < 1e-6);
  }
}

TEST_CASE("integrate_planner agrees with a 10x finer integration") {
  const double c_max = 1.2, v = 0.8, T = 1.0;
  const auto coarse =
      integrate_planner({0, 0, 0}, PiecewiseConstantControl::constant(c_max), 0.01, T, v);
  const auto fine =
      integrate_planner({0, 0, 0}, PiecewiseConstantControl::constant(c_max), 0.001, T, v);
  CHECK(distance(coarse.back_state().position(), fine.back_state().position()) < 1e-6);
  CHECK(angular_distance(coarse.back_state().theta, fine.back_state().theta) < 1e-6);
}

TEST_CASE("integrate_planner is Markov-consistent") {
  PiecewiseConstantControl ctrl{{{0.0, 0.8}, {1.0, -0.5}, {2.5, 0.1}}};
  const double v = 1.1, T = 4.0;
  const auto whole = integrate_planner({0.2, -0.3, 0.4}, ctrl, 0.01, T, v);

  const auto first = integrate_planner({0.2, -0.3, 0.4}, ctrl, 0.01, T / 2, v);
  PiecewiseConstantControl shifted;
  for (auto [t, c] : ctrl.knots) shifted.knots.push_back({t - T / 2, c});
  const auto second =
      integrate_planner(first.back_state(), shifted, 0.01, T / 2, v, first.end_time());
  CHECK(distance(whole.back_state().position(), second.back_state().position()) < 1e-9);
  CHECK(angular_distance(whole.back_state().theta, second.back_state().theta) < 1e-9);
}

TEST_CASE("integrate_planner rejects bad input") {
  CHECK_THROWS_AS(integrate_planner({std::nan(""), 0, 0},
                                    PiecewiseConstantControl::constant(0.0), 0.01, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      integrate_planner({0, 0, 0}, PiecewiseConstantControl::constant(0.0), -0.01, 1.0, 1.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      integrate_planner({0, 0, 0}, PiecewiseConstantControl::constant(0.0), 0.01, -1.0, 1.0),
      std::invalid_argument);
}

TEST_CASE("tracker derivative implements the attitude model as written") {
  const double g = 9.81;
  // Zero-acceleration inputs: pitch pi/2, roll 0, thrust g.
  TrackerState s;
  s.vx = 0.4;
  s.vy = -0.2;
  s.vz = 0.1;
  const auto hover = tracker_derivative(s, {kPi / 2, 0.0, g}, g);
  CHECK(hover[0] == doctest::Approx(0.4));
  CHECK(hover[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hover[2] == doctest::Approx(-0.2));
  CHECK(hover[3] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hover[4] == doctest::Approx(0.1));
  CHECK(hover[5] == doctest::Approx(0.0).epsilon(1e-12));

  // Free fall at rest: only gravity acts.
  const auto fall = tracker_derivative(TrackerState{}, {kPi / 2, 0.0, 0.0}, g);
  for (int i = 0; i < 5; ++i) CHECK(fall[i] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fall[5] == doctest::Approx(-g));
}

TEST_CASE("tracker derivative matches finite differences of the integrator") {
  const double g = 9.81;
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    TrackerState s{rng.uniform(-2, 2),  rng.uniform(-2, 2),  rng.uniform(-2, 2),
                   rng.uniform(-1, 1),  rng.uniform(-1, 1),  rng.uniform(-1, 1)};
    TrackerControl u{kPi / 2 + rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                     g + rng.uniform(-2, 2)};
    const double h = 1e-6;
    const TrackerState fwd = integrate_tracker_step(s, u, g, h);
    const TrackerState bwd = integrate_tracker_step(s, u, g, -h);
    const auto deriv = tracker_derivative(s, u, g);
    CHECK(std::abs((fwd.x - bwd.x) / (2 * h) - deriv[0]) < 1e-6);
    CHECK(std::abs((fwd.vx - bwd.vx) / (2 * h) - deriv[1]) < 1e-6);
    CHECK(std::abs((fwd.y - bwd.y) / (2 * h) - deriv[2]) < 1e-6);
    CHECK(std::abs((fwd.vy - bwd.vy) / (2 * h) - deriv[3]) < 1e-6);
    CHECK(std::abs((fwd.z - bwd.z) / (2 * h) - deriv[4]) < 1e-6);
    CHECK(std::abs((fwd.vz - bwd.vz) / (2 * h) - deriv[5]) < 1e-6);
  }
}

TEST_CASE("trajectory samples re-integrate consistently") {
  PiecewiseConstantControl ctrl{{{0.0, 1.0}, {1.7, -0.9}}};
  const double v = 0.9;
  const auto traj = integrate_planner({0, 0, 0.3}, ctrl, 0.01, 3.0, v);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i - 1];
    const auto& b = traj.samples[i];
    const auto redo = integrate_planner(a.state, PiecewiseConstantControl::constant(a.control.c),
                                        b.t - a.t, b.t - a.t, v);
    CHECK(distance(redo.back_state().position(), b.state.position()) < 1e-8);
    CHECK(angular_distance(redo.back_state().theta, b.state.theta) < 1e-8);
  }
}

TEST_CASE("trajectory state_at interpolates and wraps cycles") {
  const auto base = integrate_planner({0, 0, 0}, PiecewiseConstantControl::constant(0.5),
                                      0.01, 4.0, 1.0);
  Trajectory cyc = base;
  cyc.terminal_kind = TerminalKind::kHomeCycle;
  cyc.cycle_start_time = 1.0;
  const double period = cyc.cycle_period();
  const PlannerState a = cyc.state_at(2.0);
  const PlannerState b = cyc.state_at(2.0 + period);
  CHECK(distance(a.position(), b.position()) < 1e-9);
  CHECK(angular_distance(a.theta, b.theta) < 1e-9);

  // goal-terminal trajectories clamp at the end
  const PlannerState end = base.state_at(100.0);
  CHECK(distance(end.position(), base.back_state().position()) < 1e-12);
}

TEST_CASE("slice_trajectory preserves the path between cut points") {
  const auto traj = integrate_planner({0, 0, 0}, PiecewiseConstantControl::constant(0.8),
                                      0.01, 3.0, 1.0);
  const auto cut = slice_trajectory(traj, 0.7, 2.1);
  CHECK(cut.start_time == doctest::Approx(0.7));
  CHECK(cut.end_time() == doctest::Approx(2.1));
  CHECK(distance(cut.front_state().position(), traj.state_at(0.7).position()) < 1e-12);
  CHECK(distance(cut.back_state().position(), traj.state_at(2.1).position()) < 1e-12);
  for (const auto& s : cut.samples) {
    CHECK(distance(s.state.position(), traj.state_at(s.t).position()) < 1e-9);
  }
}
