#include "rfplan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "rfplan/dubins.hpp"

namespace rfplan {

namespace {

std::uint64_t artifact_hash(const ScenarioConfig& cfg) {
  RelativeParams params = cfg.relative_params();
  std::uint64_t h = hash_relative_params(params, cfg.hj.grid, cfg.hj.z_grid);
  // Solver and validation knobs that shape the stored artifact.
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  double tol = cfg.hj.residual_tol;
  std::uint64_t bits;
  static_assert(sizeof(tol) == sizeof(bits));
  std::memcpy(&bits, &tol, sizeof(bits));
  mix(bits);
  mix(cfg.hj.rollout_seed);
  return h;
}

std::vector<Vec2> decimate_polyline(const Trajectory& traj, std::size_t max_points = 400) {
  std::vector<Vec2> out;
  if (traj.samples.empty()) return out;
  const std::size_t stride = std::max<std::size_t>(1, traj.samples.size() / max_points);
  for (std::size_t i = 0; i < traj.samples.size(); i += stride) {
    out.push_back(traj.samples[i].state.position());
  }
  const Vec2 last = traj.samples.back().state.position();
  if (distance(out.back(), last) > 0.0) out.push_back(last);
  return out;
}

// Shared harness state for the framework run and the optimistic baseline.
struct Harness {
  const ScenarioConfig& cfg;
  const TebArtifact& teb;
  RunResult result;
  KnowledgeMap map;
  TrackerState tracker;
  RobustFootprint fp;
  double goal_tolerance;
  RelativeParams rel_params;
  double tick_len;
  int substeps;

  Harness(const ScenarioConfig& config, const TebArtifact& artifact, std::uint64_t seed)
      : cfg(config), teb(artifact), map(config.environment.bounds) {
    result.seed = seed;
    result.bound = artifact.bound;
    rel_params = cfg.relative_params();
    rel_params.form = artifact.grid.form;
    rel_params.d_epsilon = artifact.grid.d_epsilon;
    fp.radius = cfg.vehicle.robot_radius + artifact.bound.radius;
    goal_tolerance = cfg.termination.goal_tolerance > 0.0 ? cfg.termination.goal_tolerance
                                                          : artifact.bound.radius;
    tick_len = cfg.schedule.tick;
    substeps = std::max(1, static_cast<int>(std::lround(tick_len / cfg.planner.dt)));

    const PlannerState& home = cfg.environment.home;
    tracker.x = home.x;
    tracker.y = home.y;
    tracker.z = cfg.vehicle.planning_height;
    tracker.vx = cfg.vehicle.speed * std::cos(home.theta);
    tracker.vy = cfg.vehicle.speed * std::sin(home.theta);
    tracker.vz = 0.0;

    // Feasibility checks that need the tracking bound.
    const Box& b = cfg.environment.bounds;
    if (!b.contains(home.position(), fp.radius)) {
      throw ConfigError("scenario: home robust footprint leaves the bounds");
    }
    if (!b.contains(cfg.environment.goal.position(), fp.radius)) {
      throw ConfigError("scenario: goal robust footprint leaves the bounds");
    }
    const double zp = cfg.vehicle.planning_height;
    if (zp - artifact.bound.z_extent <= cfg.environment.z_floor ||
        zp + artifact.bound.z_extent >= cfg.environment.z_ceiling) {
      throw ConfigError("scenario: vertical tracking extent leaves the flight band");
    }
  }

  void sense(double t) {
    const std::size_t disks_before = map.sensed_disks().size();
    const std::size_t found_before = map.discovered_obstacles().size();
    map.sense(tracker.position(), cfg.environment, cfg.sensing.range, t,
              cfg.sensing.min_motion);
    const bool recorded = map.sensed_disks().size() > disks_before;
    const bool found = map.discovered_obstacles().size() > found_before;
    if (recorded || found) {
      SensorUpdateRecord rec;
      rec.t = t;
      rec.position = tracker.position();
      rec.range = cfg.sensing.range;
      rec.disk_recorded = recorded;
      for (std::size_t i = found_before; i < map.discovered_obstacles().size(); ++i) {
        rec.discovered.push_back(map.discovered_obstacles()[i].circle);
      }
      result.log.add(rec);
    }
  }

  // Advances the tracker by one tick under the optimal tracking controller
  // following `reference`; returns the reference state at the end of the
  // tick.
  PlannerState track_tick(const Trajectory& reference, double t0) {
    const double dt = tick_len / substeps;
    for (int j = 0; j < substeps; ++j) {
      const PlannerState ref = reference.state_at(t0 + j * dt);
      const RelativeState rel = relative_state(tracker, ref, cfg.vehicle.speed);
      TrackerControl u = optimal_tracking_control(teb.grid, rel, ref.theta, rel_params);
      u.u3 = optimal_vertical_thrust(teb.zgrid, tracker.z - cfg.vehicle.planning_height,
                                     tracker.vz, cfg.vehicle.control.u3,
                                     cfg.vehicle.gravity);
      tracker = integrate_tracker_step(tracker, u, cfg.vehicle.gravity, dt);
    }
    return reference.state_at(t0 + tick_len);
  }

  void violation(double t, const std::string& kind, const std::string& detail) {
    result.log.add(ViolationRecord{t, kind, detail});
  }

  // Tracker sample record plus tracking-bound and collision checks. Returns
  // the violation kind or empty.
  std::string check_tracker(double t, const PlannerState& ref) {
    const RelativeState rel = relative_state(tracker, ref, cfg.vehicle.speed);
    const double value = teb.grid.value(rel);
    result.log.add(TrackerSampleRecord{t, tracker, ref, rel, value});

    const double planar = distance(tracker.position(), ref.position());
    const double dz = std::abs(tracker.z - cfg.vehicle.planning_height);
    result.stats.max_planar_error = std::max(result.stats.max_planar_error, planar);
    result.stats.max_z_error = std::max(result.stats.max_z_error, dz);

    if (planar > teb.bound.radius + teb.kappa_planar) {
      violation(t, "tracking_bound",
                "planar error " + std::to_string(planar) + " exceeds bound");
      return "tracking_bound";
    }
    if (dz > teb.bound.z_extent + teb.kappa_z) {
      violation(t, "tracking_bound_z", "z error " + std::to_string(dz) + " exceeds extent");
      return "tracking_bound_z";
    }
    if (cfg.environment.inside_any_obstacle(tracker.position())) {
      violation(t, "collision", "tracker inside a true obstacle");
      return "collision";
    }
    if (!cfg.environment.bounds.contains(tracker.position())) {
      violation(t, "collision", "tracker left the bounds");
      return "collision";
    }
    return "";
  }

  bool at_goal() const {
    return distance(tracker.position(), cfg.environment.goal.position()) <= goal_tolerance;
  }

  void finish(RunOutcome outcome, const std::string& detail, int ticks) {
    result.outcome = outcome;
    result.detail = detail;
    result.ticks = ticks;
    result.stats.sim_time = ticks * tick_len;
    result.log.add(TerminationRecord{ticks * tick_len, detail.empty() ? to_string(outcome)
                                                                      : detail,
                                     static_cast<std::uint64_t>(ticks)});
  }
};

}  // namespace

TebArtifact acquire_teb_artifact(const ScenarioConfig& cfg, const RunOverrides& ov) {
  const std::uint64_t hash = artifact_hash(cfg);
  const std::string cache = ov.hj_cache.value_or(cfg.hj.cache_path);
  if (!cache.empty()) {
    if (auto loaded = load_teb_artifact(cache, hash)) return std::move(*loaded);
  }

  RelativeParams params = cfg.relative_params();
  SolveOptions so;
  so.residual_tol = cfg.hj.residual_tol;
  so.max_sweeps = cfg.hj.max_sweeps;
  so.threads = ov.solver_threads;

  TebArtifact art;
  art.param_hash = hash;
  art.grid = solve_value(cfg.hj.grid, params, so);
  art.zgrid = solve_z_subsystem(cfg.vehicle.control.u3, cfg.vehicle.gravity, cfg.hj.z_grid, so);

  RolloutOptions ro;
  ro.count = 200;
  ro.horizon = 6.0;
  ro.dt = 0.02;
  ro.seed = cfg.hj.rollout_seed;
  const double level = select_invariant_level(art.grid, params, ro);
  art.bound = extract_teb(art.grid, level);
  art.kappa_planar = value_cell_variation(art.grid, level);

  art.z_level = select_invariant_z_level(art.zgrid, cfg.vehicle.control.u3, cfg.vehicle.gravity);
  art.bound.z_extent = z_extent_for_level(art.zgrid, art.z_level);
  art.kappa_z = z_value_cell_variation(art.zgrid, art.z_level);

  if (!cache.empty()) save_teb_artifact(art, cache);
  return art;
}

RunResult run(const ScenarioConfig& cfg, const RunOverrides& ov,
              const ResponseObserver& observer, const TebArtifact* prebuilt) {
  cfg.validate();
  const std::uint64_t seed = ov.seed.value_or(cfg.planner.seed);
  TebArtifact local_art;
  if (!prebuilt) {
    local_art = acquire_teb_artifact(cfg, ov);
    prebuilt = &local_art;
  }
  Harness h(cfg, *prebuilt, seed);

  const Environment& env = cfg.environment;
  const double v = cfg.vehicle.speed;
  const double R = cfg.vehicle.turn_radius();

  Rng master(seed);
  Rng rng_sample = master.fork();
  Rng rng_sched = master.fork();
  const std::uint64_t policy_seed = master.next_u64();
  const double epsilon = ov.epsilon.value_or(cfg.planner.epsilon);
  const int max_ticks = ov.max_ticks.value_or(cfg.termination.max_ticks);

  GraphParams gp;
  gp.turn_radius = R;
  gp.speed = v;
  gp.sample_dt = cfg.planner.dt;
  gp.heading_weight = cfg.planner.heading_weight > 0.0 ? cfg.planner.heading_weight : R;
  gp.safety_check_gap = cfg.planner.safety_check_gap;

  ReachGraph graph(env.home, gp);
  Explorer explorer(ExplorationPolicy{epsilon, policy_seed}, env.goal.position());

  // t = 0: sense from home, then admit the initial loop through home.
  h.sense(0.0);
  const DubinsPath loop_path{DubinsWord::kLSL, {2.0 * std::numbers::pi, 0.0, 0.0}, R};
  Trajectory loop = dubins_trajectory(env.home, loop_path, v, cfg.planner.dt, 0.0);
  loop.terminal_kind = TerminalKind::kHomeCycle;
  if (!trajectory_safe(loop, h.fp, h.map, v, gp.safety_check_gap)) {
    throw ConfigError(
        "scenario: initial loop through home is not safely contained in sensed space");
  }
  const EdgeId loop_edge = graph.add_edge(graph.home_id(), graph.home_id(), loop, 0.0);
  h.result.log.add(GraphVertexRecord{0.0, graph.home_id(), env.home});
  h.result.log.add(GraphEdgeRecord{0.0, loop_edge, graph.home_id(), graph.home_id(),
                                   graph.edge(loop_edge).cost, 0.0});

  Trajectory stub0;
  stub0.start_time = 0.0;
  stub0.samples.push_back({0.0, env.home, PlannerControl{0.0}});
  explorer.set_initial(assemble_response(graph, std::move(stub0), graph.home_id(),
                                         {loop_edge}, TerminalKind::kHomeCycle,
                                         std::nullopt));

  auto log_response = [&](const PlanResponse& resp, double t) {
    PlanResponseRecord rec;
    rec.t = t;
    rec.terminal = resp.trajectory.terminal_kind;
    rec.fallback = resp.fallback;
    rec.selected = resp.selected;
    rec.end_time = resp.trajectory.end_time();
    rec.cycle_start_time = resp.trajectory.cycle_start_time;
    rec.polyline = decimate_polyline(resp.trajectory);
    h.result.log.add(rec);
    ++h.result.stats.responses;
    if (resp.fallback) ++h.result.stats.fallback_responses;
    if (observer) observer(resp, h.map, t);
  };
  log_response(explorer.current(), 0.0);

  // Watermarks for logging graph growth and promotions.
  std::size_t vertex_mark = graph.vertices().size();
  std::size_t edge_mark = graph.edges().size();
  std::vector<bool> backward_shadow(graph.vertices().size());
  for (const Vertex& vx : graph.vertices()) backward_shadow[vx.id] = vx.in_backward_set;

  auto log_graph_growth = [&](double t) -> bool {
    for (; vertex_mark < graph.vertices().size(); ++vertex_mark) {
      const Vertex& vx = graph.vertices()[vertex_mark];
      h.result.log.add(GraphVertexRecord{t, vx.id, vx.state});
    }
    for (; edge_mark < graph.edges().size(); ++edge_mark) {
      const Edge& e = graph.edges()[edge_mark];
      h.result.log.add(GraphEdgeRecord{t, e.id, e.from, e.to, e.cost, e.knowledge_stamp});
    }
    backward_shadow.resize(graph.vertices().size(), false);
    GraphPromoteRecord promo;
    promo.t = t;
    for (const Vertex& vx : graph.vertices()) {
      if (vx.in_backward_set && !backward_shadow[vx.id]) {
        backward_shadow[vx.id] = true;
        promo.ids.push_back(vx.id);
      }
    }
    if (!promo.ids.empty()) {
      // Closure: every newly viable vertex must hold a finite witness cost.
      for (std::uint32_t id : promo.ids) {
        const Vertex& vx = graph.vertex(id);
        if (!std::isfinite(vx.cost_to_home) && !std::isfinite(vx.cost_to_goal)) {
          h.violation(t, "backward_closure",
                      "vertex " + std::to_string(id) + " promoted without witness");
          return false;
        }
      }
      h.result.log.add(promo);
    }
    return true;
  };

  // Round-robin consolidation cursor.
  VertexId consolidate_cursor = 0;

  enum class Op { kExpand, kGoalInsert, kConsolidate };
  auto run_graph_op = [&](Op op, double t) {
    switch (op) {
      case Op::kExpand: {
        if (auto candidate = sample_candidate(h.map, h.fp, rng_sample)) {
          outbound_expand(graph, *candidate, h.map, h.fp, cfg.planner.k_neighbors, t);
        }
        break;
      }
      case Op::kGoalInsert: {
        if (!graph.goal_id() && footprint_free(env.goal, h.fp, h.map) &&
            outbound_expand(graph, env.goal, h.map, h.fp, cfg.planner.k_neighbors, t)) {
          if (auto gid = graph.find_matching(env.goal)) graph.set_goal(*gid);
        }
        break;
      }
      case Op::kConsolidate: {
        const std::size_t n = graph.vertices().size();
        for (std::size_t probe = 0; probe < n; ++probe) {
          const VertexId id = static_cast<VertexId>((consolidate_cursor + probe) % n);
          if (!graph.vertex(id).in_backward_set) {
            consolidate_cursor = (id + 1) % static_cast<VertexId>(n);
            inbound_consolidate(graph, id, h.map, h.fp, cfg.planner.k_neighbors, t);
            break;
          }
        }
        break;
      }
    }
  };

  // Visited-marking progress through the active response.
  std::size_t arrival_idx = 0;
  std::size_t unvisited_at_selection = 0;
  bool progress_pending = false;

  auto count_unvisited = [&]() {
    std::size_t n = 0;
    for (const Vertex& vx : graph.vertices()) {
      if (vx.in_backward_set && !vx.visited) ++n;
    }
    return n;
  };

  auto finish_run = [&](RunOutcome outcome, const std::string& detail, int tick) {
    h.result.stats.vertices = graph.vertices().size();
    h.result.stats.edges = graph.edges().size();
    h.result.stats.backward_vertices = 0;
    for (const Vertex& vx : graph.vertices()) {
      if (vx.in_backward_set) ++h.result.stats.backward_vertices;
    }
    h.finish(outcome, detail, tick);
    return std::move(h.result);
  };

  double last_plan_time = 0.0;

  for (int tick = 1; tick <= max_ticks; ++tick) {
    const double t0 = (tick - 1) * h.tick_len;
    const double t1 = tick * h.tick_len;
    const PlanResponse& active = explorer.current();

    // (1)+(2) robust tracking along the active reference.
    const PlannerState ref = h.track_tick(active.trajectory, t0);
    const std::string fault = h.check_tracker(t1, ref);
    if (!fault.empty()) {
      return finish_run(RunOutcome::kViolation, fault, tick);
    }

    // (3) sense from the tracker position.
    h.sense(t1);

    // (4) scheduled graph work (order optionally permuted per tick).
    std::vector<Op> ops;
    for (int i = 0; i < cfg.schedule.expansion_attempts; ++i) ops.push_back(Op::kExpand);
    ops.push_back(Op::kGoalInsert);
    for (int i = 0; i < cfg.schedule.consolidation_attempts; ++i) {
      ops.push_back(Op::kConsolidate);
    }
    if (cfg.schedule.permutation_seed != 0) {
      Rng perm(cfg.schedule.permutation_seed ^ (0x9e3779b97f4a7c15ull * tick));
      for (std::size_t i = ops.size(); i > 1; --i) {
        std::swap(ops[i - 1], ops[perm.uniform_index(i)]);
      }
    }
    for (Op op : ops) run_graph_op(op, t1);
    if (!log_graph_growth(t1)) {
      return finish_run(RunOutcome::kViolation, "backward_closure", tick);
    }

    // Mark chain vertices the reference has passed.
    bool selected_reached = false;
    {
      const PlanResponse& resp = explorer.current();
      VisitRecord visit;
      visit.t = t1;
      while (arrival_idx < resp.vertex_arrivals.size() &&
             resp.vertex_arrivals[arrival_idx].first <= t1 + 1e-9) {
        const VertexId id = resp.vertex_arrivals[arrival_idx].second;
        if (!graph.vertex(id).visited) visit.ids.push_back(id);
        const VertexId ids[] = {id};
        mark_visited(graph, ids);
        if (resp.selected && id == *resp.selected) selected_reached = true;
        ++arrival_idx;
      }
      if (!visit.ids.empty()) h.result.log.add(visit);
    }
    if (progress_pending && selected_reached) {
      progress_pending = false;
      if (count_unvisited() >= unvisited_at_selection) {
        h.violation(t1, "progress", "selected vertex did not reduce the unvisited set");
        return finish_run(RunOutcome::kViolation, "progress", tick);
      }
    }

    // (5) replan when due.
    const bool due = (t1 - last_plan_time >= cfg.planner.t_replan - 1e-9) || selected_reached;
    if (due) {
      const PlannerState at_ref = explorer.current().trajectory.state_at(t1);
      unvisited_at_selection = count_unvisited();
      const PlanResponse* resp = nullptr;
      try {
        resp = &explorer.request_trajectory(graph, at_ref, t1);
      } catch (const std::logic_error& e) {
        h.violation(t1, "framework", e.what());
        return finish_run(RunOutcome::kViolation, "framework", tick);
      }
      last_plan_time = t1;
      arrival_idx = 0;
      progress_pending = resp->selected.has_value() && !resp->fallback;

      // Every response must be safe for the knowledge at emission and end in
      // the goal or a verified cycle through home.
      if (!trajectory_safe(resp->trajectory, h.fp, h.map, v, gp.safety_check_gap)) {
        h.violation(t1, "unsafe_response", "emitted trajectory fails the safety check");
        return finish_run(RunOutcome::kViolation, "unsafe_response", tick);
      }
      if (resp->trajectory.terminal_kind == TerminalKind::kGoalTerminal) {
        if (!states_match(resp->trajectory.back_state(), env.goal, 1e-5, 1e-5)) {
          h.violation(t1, "nonviable_response", "goal trajectory does not end at the goal");
          return finish_run(RunOutcome::kViolation, "nonviable_response", tick);
        }
      } else {
        const PlannerState cycle_start =
            resp->trajectory.state_at(resp->trajectory.cycle_start_time);
        bool through_home = false;
        for (const auto& [at, id] : resp->vertex_arrivals) {
          if (id == graph.home_id() &&
              at >= resp->trajectory.cycle_start_time - 1e-9) {
            through_home = true;
          }
        }
        if (!states_match(cycle_start, resp->trajectory.back_state(), 1e-5, 1e-5) ||
            !through_home) {
          h.violation(t1, "nonviable_response", "cycle does not close through home");
          return finish_run(RunOutcome::kViolation, "nonviable_response", tick);
        }
      }
      log_response(*resp, t1);
    }

    // (6) periodic structural invariants.
    if (tick % 25 == 0) {
      const auto issues = graph.check_invariants();
      if (!issues.empty()) {
        h.violation(t1, "graph_invariant", issues.front());
        return finish_run(RunOutcome::kViolation, "graph_invariant", tick);
      }
    }

    if (h.at_goal()) {
      return finish_run(RunOutcome::kSuccess, "success", tick);
    }
  }

  return finish_run(RunOutcome::kTimeout, "timeout", max_ticks);
}

RunResult run_baseline_optimistic(const ScenarioConfig& cfg, const RunOverrides& ov,
                                  const TebArtifact* prebuilt) {
  cfg.validate();
  const std::uint64_t seed = ov.seed.value_or(cfg.planner.seed);
  TebArtifact local_art;
  if (!prebuilt) {
    local_art = acquire_teb_artifact(cfg, ov);
    prebuilt = &local_art;
  }
  Harness h(cfg, *prebuilt, seed);

  const Environment& env = cfg.environment;
  const double v = cfg.vehicle.speed;
  const double R = cfg.vehicle.turn_radius();
  const int max_ticks = ov.max_ticks.value_or(cfg.termination.max_ticks);
  Rng rng(seed ^ 0x5dee2c6fba91b1a5ull);

  h.sense(0.0);

  auto plan_optimistic = [&](const PlannerState& from, double t) -> std::optional<Trajectory> {
    // Direct shot first, then a handful of one-waypoint detours; UNKNOWN is
    // treated as free throughout.
    auto direct = dubins_connect(from, env.goal, R, v, cfg.planner.dt, t);
    if (direct &&
        trajectory_clear_of_known(*direct, h.fp, h.map, v, cfg.planner.safety_check_gap)) {
      return direct;
    }
    for (int i = 0; i < 8; ++i) {
      PlannerState waypoint;
      waypoint.x = rng.uniform(env.bounds.lo.x, env.bounds.hi.x);
      waypoint.y = rng.uniform(env.bounds.lo.y, env.bounds.hi.y);
      waypoint.theta = std::numbers::pi - rng.next_double() * 2.0 * std::numbers::pi;
      auto first = dubins_connect(from, waypoint, R, v, cfg.planner.dt, t);
      if (!first ||
          !trajectory_clear_of_known(*first, h.fp, h.map, v, cfg.planner.safety_check_gap)) {
        continue;
      }
      auto second = dubins_connect(waypoint, env.goal, R, v, cfg.planner.dt, first->end_time());
      if (!second ||
          !trajectory_clear_of_known(*second, h.fp, h.map, v, cfg.planner.safety_check_gap)) {
        continue;
      }
      Trajectory combined = *first;
      combined.append(*second);
      return combined;
    }
    return std::nullopt;
  };

  auto initial = plan_optimistic(env.home, 0.0);
  if (!initial) {
    throw ConfigError("baseline: no optimistic plan exists at start");
  }
  Trajectory active = std::move(*initial);
  {
    PlanResponseRecord rec;
    rec.t = 0.0;
    rec.terminal = TerminalKind::kGoalTerminal;
    rec.end_time = active.end_time();
    rec.polyline = decimate_polyline(active);
    h.result.log.add(rec);
    ++h.result.stats.responses;
  }

  double last_plan_time = 0.0;
  for (int tick = 1; tick <= max_ticks; ++tick) {
    const double t0 = (tick - 1) * h.tick_len;
    const double t1 = tick * h.tick_len;

    const PlannerState ref = h.track_tick(active, t0);
    const std::string fault = h.check_tracker(t1, ref);
    if (!fault.empty()) {
      h.finish(RunOutcome::kViolation, fault, tick);
      return std::move(h.result);
    }

    h.sense(t1);

    if (t1 - last_plan_time >= cfg.planner.t_replan - 1e-9) {
      last_plan_time = t1;
      const PlannerState at_ref = active.state_at(t1);
      if (auto plan = plan_optimistic(at_ref, t1)) {
        active = std::move(*plan);
        PlanResponseRecord rec;
        rec.t = t1;
        rec.terminal = TerminalKind::kGoalTerminal;
        rec.end_time = active.end_time();
        rec.polyline = decimate_polyline(active);
        h.result.log.add(rec);
        ++h.result.stats.responses;
      } else {
        // No optimistic escape; if the committed path ahead is already known
        // to collide, the constant-speed vehicle is trapped.
        const double look_end = std::min(t1 + 3.0, active.end_time());
        Trajectory ahead = slice_trajectory(active, active.wrap_time(t1), look_end);
        if (!trajectory_clear_of_known(ahead, h.fp, h.map, v, cfg.planner.safety_check_gap)) {
          h.violation(t1, "trapped", "no optimistic plan and committed path is blocked");
          h.finish(RunOutcome::kViolation, "trapped", tick);
          return std::move(h.result);
        }
      }
    }

    if (h.at_goal()) {
      h.finish(RunOutcome::kSuccess, "success", tick);
      return std::move(h.result);
    }
  }

  h.finish(RunOutcome::kTimeout, "timeout", max_ticks);
  return std::move(h.result);
}

}  // namespace rfplan
