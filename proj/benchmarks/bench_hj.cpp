#include <benchmark/benchmark.h>

#include "rfplan/reachability.hpp"

namespace {

rfplan::RelativeParams test_params() {
  rfplan::RelativeParams p;
  p.v = 0.6;
  p.g = 9.81;
  p.c = {-1.2, 1.2};
  p.u.u1 = {std::numbers::pi / 2 - 0.25, std::numbers::pi / 2 + 0.25};
  p.u.u2 = {-0.25, 0.25};
  p.u.u3 = {7.81, 11.81};
  p.theta_samples = 16;
  return p;
}

}  // namespace

static void BM_ValueSweeps(benchmark::State& state) {
  rfplan::GridSpec4 spec;
  const int n = static_cast<int>(state.range(0));
  spec.axes[0] = {0.0, 3.0, n, false};
  spec.axes[1] = {-std::numbers::pi, std::numbers::pi, n, true};
  spec.axes[2] = {-1.2, 1.2, n, false};
  spec.axes[3] = {-1.2, 1.2, n, false};
  rfplan::SolveOptions opts;
  opts.max_sweeps = 10;
  opts.residual_tol = 1e-30;  // force exactly max_sweeps sweeps
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(rfplan::solve_value(spec, test_params(), opts));
    } catch (const std::runtime_error&) {
      // expected: the sweep budget is the benchmarked quantity
    }
  }
  state.SetItemsProcessed(state.iterations() * 10 * spec.size());
}
BENCHMARK(BM_ValueSweeps)->Arg(9)->Arg(13)->Arg(17);

static void BM_ZSolve(benchmark::State& state) {
  rfplan::ZGridSpec spec;
  spec.axes[0] = {-1.0, 1.0, 41, false};
  spec.axes[1] = {-2.0, 2.0, 41, false};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rfplan::solve_z_subsystem({7.81, 11.81}, 9.81, spec, {}));
  }
}
BENCHMARK(BM_ZSolve);
