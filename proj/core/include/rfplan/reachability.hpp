#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "rfplan/dynamics.hpp"
#include "rfplan/grid.hpp"
#include "rfplan/rng.hpp"

namespace rfplan {

// Tracker state expressed in the reference vehicle's Frenet frame.
struct RelativeState {
  double d = 0.0;    // planar distance [m], >= 0
  double psi = 0.0;  // bearing of the tracker in the frame [rad], (-pi, pi]
  double vT = 0.0;   // relative velocity along the reference heading [m/s]
  double vN = 0.0;   // relative velocity normal to the reference heading [m/s]

  std::array<double, 4> as_array() const { return {d, psi, vT, vN}; }
};

// Two relative-dynamics right-hand sides are supported.
//   kSimplified: pitch/roll enter as direct acceleration commands and the
//     bearing rate is evaluated at unit distance; affine in all controls.
//   kExact: Frenet-frame relative dynamics of the two vehicle models, with
//     attitude entering through g*cos(u1) / g*sin(u2) and a 1/d bearing rate
//     (clamped at d_epsilon near the origin).
// The kExact form is what a jointly simulated tracker/reference pair
// realizes; it backs every runtime safety claim. kSimplified is retained for
// comparison and tests.
enum class RelativeDynamicsForm { kSimplified, kExact };

struct RelativeParams {
  double v = 0.0;  // reference speed [m/s]
  double g = 9.81;
  Interval c;  // reference turn rate interval
  TrackerControlBounds u;
  RelativeDynamicsForm form = RelativeDynamicsForm::kExact;
  double d_epsilon = 0.0;  // bearing-rate clamp; 0 = one d-cell, set at solve
  int theta_samples = 16;  // worst-case heading samples in the Hamiltonian

  double max_abs_turn_rate() const { return std::max(std::abs(c.lo), std::abs(c.hi)); }
};

// Frenet-frame relative state of tracker s with respect to reference p.
// psi is 0 by convention when the positions coincide.
RelativeState relative_state(const TrackerState& s, const PlannerState& p, double v);

// Inverse embedding: the world-frame tracker consistent with relative state r
// when the reference is at p moving at speed v (z channel zeroed).
TrackerState tracker_from_relative(const RelativeState& r, const PlannerState& p, double v);

// Right-hand side of the selected relative-dynamics form.
std::array<double, 4> relative_derivative(const RelativeState& r, const TrackerControl& u,
                                          const PlannerControl& c, double theta,
                                          const RelativeParams& params);

using GridSpec4 = GridSpec<4>;  // axes ordered (d, psi, vT, vN); psi periodic

// Converged value function of the pursuit-evasion game with stage cost d:
// the reference maximizes the peak relative distance, the tracker minimizes
// it. Values are capped at value_cap where the reference wins.
struct ValueGrid {
  GridField<4> field;
  double converged_residual = 0.0;
  int sweeps = 0;
  double value_cap = 0.0;
  double d_epsilon = 0.0;
  RelativeDynamicsForm form = RelativeDynamicsForm::kExact;

  double value(const RelativeState& r) const { return field.interpolate(r.as_array()); }
};

struct SolveOptions {
  double residual_tol = 1e-6;
  int max_sweeps = 20000;
  double cfl = 0.8;
  double value_cap = 0.0;  // 0 = twice the d-axis maximum
  int threads = 0;         // 0 = hardware concurrency
  // Floor on the turn-rate magnitude used for dissipation sizing. Solves of
  // nested adversary intervals compare node-wise exactly only when run with
  // the same dissipation; pin this to the widest interval for that.
  double dissipation_turn_rate = 0.0;
};

// Solves the game on the grid by monotone Lax-Friedrichs sweeps (Jacobi
// updates into a double buffer, so the result is independent of node order
// and thread count). Throws std::runtime_error with diagnostics if the
// residual fails to reach tolerance within max_sweeps.
ValueGrid solve_value(const GridSpec4& spec, const RelativeParams& params,
                      const SolveOptions& opts = {});

// Tracker control minimizing the numerical Hamiltonian at r, using
// central-difference gradients of the interpolated value. States outside the
// grid are clamped (reported through `clamped` when provided). u3 is left at
// hover; the vertical channel has its own grid.
TrackerControl optimal_tracking_control(const ValueGrid& grid, const RelativeState& r,
                                        double theta, const RelativeParams& params,
                                        bool* clamped = nullptr);

// Planar tracking bound: a disc containing the projection of the chosen
// sublevel set, plus the vertical extent solved separately.
struct TrackingBound {
  double radius = 0.0;    // planar disc radius [m]
  double z_extent = 0.0;  // half-height [m]
  double level = 0.0;     // sublevel value used [m]
};

// Minimum of the value over (vT, vN) for each (d, psi) node.
GridField<2> planar_min_value(const ValueGrid& grid);

// Largest value difference across any grid edge touching the sublevel set
// {value <= level}; the interpolation slack used by runtime checks.
double value_cell_variation(const ValueGrid& grid, double level);

// Disc radius of the sublevel set {min over (vT,vN) of value <= level}.
// Throws std::runtime_error if the set is empty. z_extent is left 0.
TrackingBound extract_teb(const ValueGrid& grid, double level);

// --- Vertical (z, vz) subsystem -------------------------------------------

using ZGridSpec = GridSpec<2>;  // axes ordered (z, vz), both non-periodic

struct ZValueGrid {
  GridField<2> field;
  double converged_residual = 0.0;
  int sweeps = 0;
  double value_cap = 0.0;

  double value(double z, double vz) const { return field.interpolate({z, vz}); }
};

// Double-integrator game on (z, vz) with stage cost |z| and thrust interval
// u3 (which must bracket g, otherwise hover is infeasible and this throws).
ZValueGrid solve_z_subsystem(const Interval& u3, double g, const ZGridSpec& spec,
                             const SolveOptions& opts = {});

// Thrust minimizing the vertical Hamiltonian at (z, vz).
double optimal_vertical_thrust(const ZValueGrid& grid, double z, double vz,
                               const Interval& u3, double g);

// Max |z| over the sublevel set {value <= level}; throws if empty.
double z_extent_for_level(const ZValueGrid& grid, double level);

// Largest value difference across any grid edge touching {value <= level}.
double z_value_cell_variation(const ZValueGrid& grid, double level);

// Smallest ladder level whose sublevel set stays invariant under the optimal
// thrust in closed loop (deterministic rollouts from in-set nodes).
double select_invariant_z_level(const ZValueGrid& grid, const Interval& u3, double g);

// --- Adversarial rollout validation ----------------------------------------

struct RolloutOptions {
  int count = 1000;
  double horizon = 8.0;  // [s]
  double dt = 0.01;
  std::uint64_t seed = 0;
  double distance_bound = 0.0;  // if > 0, also flag planar distance above it
};

struct RolloutStats {
  int runs = 0;
  int value_violations = 0;     // interpolated value exceeded level + kappa
  int distance_violations = 0;  // planar distance exceeded distance_bound
  double max_value = 0.0;       // max interpolated value seen
  double max_distance = 0.0;    // max planar distance seen
};

// Simulates tracker (optimal control) against a reference whose turn rate is
// sampled adversarially from the interval endpoints each step, starting from
// random states inside {value <= level}. The relative motion follows the
// true vehicle models, not the grid dynamics.
RolloutStats run_adversarial_rollouts(const ValueGrid& grid, const RelativeParams& params,
                                      double level, double kappa, const RolloutOptions& opts);

// Smallest level from a quantile ladder whose sublevel set is nonempty and
// passes the rollout invariance check. Throws if none passes.
double select_invariant_level(const ValueGrid& grid, const RelativeParams& params,
                              const RolloutOptions& opts);

// --- Cached artifact --------------------------------------------------------

// Everything the simulator needs at runtime, cacheable across runs.
struct TebArtifact {
  ValueGrid grid;
  ZValueGrid zgrid;
  TrackingBound bound;
  double z_level = 0.0;
  double kappa_planar = 0.0;
  double kappa_z = 0.0;
  std::uint64_t param_hash = 0;
};

std::uint64_t hash_relative_params(const RelativeParams& params, const GridSpec4& spec,
                                   const ZGridSpec& zspec);

void save_teb_artifact(const TebArtifact& artifact, const std::string& path);
std::optional<TebArtifact> load_teb_artifact(const std::string& path,
                                             std::uint64_t expected_hash);

}  // namespace rfplan
