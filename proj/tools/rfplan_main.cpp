#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rfplan/plots.hpp"
#include "rfplan/scenario.hpp"
#include "rfplan/sim.hpp"

namespace {

int do_run(const std::string& scenario_path, const std::string& out_dir,
           const rfplan::RunOverrides& overrides, bool baseline, bool with_plots) {
  namespace fs = std::filesystem;
  using namespace rfplan;

  const ScenarioConfig cfg = load_scenario(scenario_path);
  fs::create_directories(out_dir);

  const TebArtifact artifact = acquire_teb_artifact(cfg, overrides);
  const RunResult result = baseline ? run_baseline_optimistic(cfg, overrides, &artifact)
                                    : run(cfg, overrides, nullptr, &artifact);

  const std::string log_path = out_dir + "/run.jsonl";
  result.log.write_jsonl(log_path, cfg.name, result.seed, &cfg.environment,
                         cfg.vehicle.planning_height);

  if (with_plots) {
    std::ifstream in(log_path);
    std::ostringstream text;
    text << in.rdbuf();
    emit_plots(parse_runlog_jsonl(text.str()), out_dir, &artifact);
  }

  std::cout << "scenario: " << cfg.name << "\n"
            << "seed: " << result.seed << "\n"
            << "outcome: " << result.detail << " after " << result.ticks << " ticks ("
            << result.stats.sim_time << " s)\n"
            << "teb: radius " << artifact.bound.radius << " m, z extent "
            << artifact.bound.z_extent << " m (level " << artifact.bound.level << ")\n"
            << "graph: " << result.stats.vertices << " vertices, " << result.stats.edges
            << " edges, " << result.stats.backward_vertices << " viable\n"
            << "tracking: max planar error " << result.stats.max_planar_error
            << " m, max z error " << result.stats.max_z_error << " m\n"
            << "log: " << log_path << "\n";
  return result.exit_code();
}

int do_plots(const std::string& log_path, const std::string& out_dir) {
  using namespace rfplan;
  std::ifstream in(log_path);
  if (!in) {
    std::cerr << "cannot open log: " << log_path << "\n";
    return 2;
  }
  std::ostringstream text;
  text << in.rdbuf();
  const auto files = emit_plots(parse_runlog_jsonl(text.str()), out_dir);
  for (const auto& f : files) std::cout << f << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recursively feasible exploration planner"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  std::string baseline_kind;
  std::string hj_cache;
  std::int64_t seed = -1;
  std::int64_t max_ticks = -1;
  double epsilon = -1.0;
  bool no_plots = false;

  CLI::App* run_cmd = app.add_subcommand("run", "simulate a scenario");
  run_cmd->add_option("--scenario", scenario_path, "scenario file")->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--seed", seed, "seed override");
  run_cmd->add_option("--max-ticks", max_ticks, "tick budget override");
  run_cmd->add_option("--baseline", baseline_kind, "baseline planner (optimistic)");
  run_cmd->add_option("--epsilon", epsilon, "exploration epsilon override");
  run_cmd->add_option("--hj-cache", hj_cache, "value-function cache file");
  run_cmd->add_flag("--no-plots", no_plots, "skip plot emission");

  std::string log_path;
  CLI::App* plots_cmd = app.add_subcommand("plots", "render plots from a run log");
  plots_cmd->add_option("--log", log_path, "run.jsonl path")->required();
  plots_cmd->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      rfplan::RunOverrides ov;
      if (seed >= 0) ov.seed = static_cast<std::uint64_t>(seed);
      if (max_ticks > 0) ov.max_ticks = static_cast<int>(max_ticks);
      if (epsilon >= 0.0) ov.epsilon = epsilon;
      if (!hj_cache.empty()) ov.hj_cache = hj_cache;
      bool baseline = false;
      if (!baseline_kind.empty()) {
        if (baseline_kind != "optimistic") {
          std::cerr << "unknown baseline: " << baseline_kind << "\n";
          return 2;
        }
        baseline = true;
      }
      return do_run(scenario_path, out_dir, ov, baseline, !no_plots);
    }
    return do_plots(log_path, out_dir);
  } catch (const rfplan::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
