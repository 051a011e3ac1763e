#pragma once

#include <functional>
#include <optional>
#include <string>

#include "rfplan/explorer.hpp"
#include "rfplan/runlog.hpp"
#include "rfplan/scenario.hpp"

namespace rfplan {

enum class RunOutcome { kSuccess, kTimeout, kViolation };

inline const char* to_string(RunOutcome o) {
  switch (o) {
    case RunOutcome::kSuccess: return "success";
    case RunOutcome::kTimeout: return "timeout";
    case RunOutcome::kViolation: return "violation";
  }
  return "?";
}

// Command-line overrides layered on top of the scenario file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> max_ticks;
  std::optional<double> epsilon;
  std::optional<std::string> hj_cache;
  int solver_threads = 0;
};

struct RunStats {
  double max_planar_error = 0.0;
  double max_z_error = 0.0;
  int responses = 0;
  int fallback_responses = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t backward_vertices = 0;
  double sim_time = 0.0;
};

struct RunResult {
  RunOutcome outcome = RunOutcome::kTimeout;
  std::string detail;  // violation kind for kViolation
  int ticks = 0;
  std::uint64_t seed = 0;
  RunLog log;
  RunStats stats;
  TrackingBound bound;

  int exit_code() const { return outcome == RunOutcome::kViolation ? 1 : 0; }
};

// Per-response hook for external verification: receives the emitted response
// and the knowledge available at emission time.
using ResponseObserver =
    std::function<void(const PlanResponse&, const KnowledgeMap&, double t)>;

// Solves or loads the cached tracking-bound artifact for this scenario.
TebArtifact acquire_teb_artifact(const ScenarioConfig& cfg, const RunOverrides& ov = {});

// Deterministic closed-loop run: graph building, exploration, robust
// tracking and sensing interleaved on a fixed tick schedule. Throws
// ConfigError for infeasible scenarios; any runtime invariant breach yields
// RunOutcome::kViolation and a Violation record.
RunResult run(const ScenarioConfig& cfg, const RunOverrides& ov = {},
              const ResponseObserver& observer = nullptr,
              const TebArtifact* prebuilt = nullptr);

// Same harness, but the reference plans straight to the goal assuming every
// UNKNOWN region is free. Collisions and trapped states are recorded
// outcomes here.
RunResult run_baseline_optimistic(const ScenarioConfig& cfg, const RunOverrides& ov = {},
                                  const TebArtifact* prebuilt = nullptr);

}  // namespace rfplan
