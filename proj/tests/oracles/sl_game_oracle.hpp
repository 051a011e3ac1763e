#pragma once

// Independent value-iteration oracle for the relative-distance game: a
// semi-Lagrangian scheme (interpolate the previous iterate at the point one
// short step downstream, candidates at control extremes) instead of the
// production finite-difference sweep. Shares only the dynamics definition.

#include <array>
#include <cmath>
#include <vector>

#include "rfplan/reachability.hpp"

namespace rfplan::test_oracle {

struct SlGameResult {
  GridField<4> value;
  // argmin control (u1, u2) recorded at each node, and the margin by which
  // it beat the runner-up candidate.
  std::vector<TrackerControl> argmin;
  std::vector<double> argmin_margin;
};

// One-step policy extraction from a converged oracle value at a FIXED
// heading: argmin over control candidates of the worst-case (over turn rate)
// next-step value. Mirrors what the runtime controller computes.
struct SlPolicy {
  std::vector<TrackerControl> argmin;
  // How much the best candidate beats the best alternative that differs in
  // that control axis; an axis is decisive only where its margin is large.
  std::vector<double> margin_u1;
  std::vector<double> margin_u2;
};

inline SlPolicy sl_extract_policy(const GridField<4>& value, const RelativeParams& params,
                                  double theta, double step) {
  const GridSpec4& spec = value.spec;
  SlPolicy out;
  out.argmin.resize(spec.size());
  out.margin_u1.assign(spec.size(), 0.0);
  out.margin_u2.assign(spec.size(), 0.0);

  std::vector<double> u1_cands{params.u.u1.lo, params.u.u1.hi};
  if (params.u.u1.contains(std::numbers::pi / 2)) u1_cands.push_back(std::numbers::pi / 2);
  std::vector<double> u2_cands{params.u.u2.lo, params.u.u2.hi};
  if (params.u.u2.contains(0.0)) u2_cands.push_back(0.0);

  for (std::size_t flat = 0; flat < spec.size(); ++flat) {
    const auto idx = spec.unflatten(flat);
    const RelativeState r{spec.axes[0].coord(idx[0]), spec.axes[1].coord(idx[1]),
                          spec.axes[2].coord(idx[2]), spec.axes[3].coord(idx[3])};

    auto continuation = [&](double u1, double u2) {
      double worst = -std::numeric_limits<double>::infinity();
      for (double c : {params.c.lo, params.c.hi}) {
        const auto f = relative_derivative(r, {u1, u2, params.g}, {c}, theta, params);
        std::array<double, 4> x{r.d + step * f[0], r.psi + step * f[1], r.vT + step * f[2],
                                r.vN + step * f[3]};
        x[0] = std::max(x[0], 0.0);
        worst = std::max(worst, value.interpolate(x));
      }
      return worst;
    };

    double best = std::numeric_limits<double>::infinity();
    TrackerControl best_u;
    for (double u1 : u1_cands) {
      for (double u2 : u2_cands) {
        const double v = continuation(u1, u2);
        if (v < best) {
          best = v;
          best_u = {u1, u2, params.g};
        }
      }
    }
    double best_other_u1 = std::numeric_limits<double>::infinity();
    double best_other_u2 = std::numeric_limits<double>::infinity();
    for (double u1 : u1_cands) {
      for (double u2 : u2_cands) {
        if (u1 != best_u.u1) best_other_u1 = std::min(best_other_u1, continuation(u1, u2));
        if (u2 != best_u.u2) best_other_u2 = std::min(best_other_u2, continuation(u1, u2));
      }
    }
    out.argmin[flat] = best_u;
    out.margin_u1[flat] = best_other_u1 - best;
    out.margin_u2[flat] = best_other_u2 - best;
  }
  return out;
}

inline SlGameResult sl_value_iteration(const GridSpec4& spec, const RelativeParams& params,
                                       int theta_candidates = 4, int sweeps = 400,
                                       double step = 0.0) {
  SlGameResult out;
  out.value.spec = spec;
  const std::size_t n = spec.size();
  out.value.values.resize(n);
  out.argmin.resize(n);
  out.argmin_margin.assign(n, 0.0);

  std::vector<double> stage(n);
  for (std::size_t flat = 0; flat < n; ++flat) {
    stage[flat] = spec.axes[0].coord(spec.unflatten(flat)[0]);
  }
  out.value.values = stage;

  if (step <= 0.0) {
    double h_min = spec.axes[0].step();
    for (const AxisSpec& a : spec.axes) h_min = std::min(h_min, a.step());
    step = 0.25 * h_min;  // conservative; SL is unconditionally stable
  }

  std::vector<double> u1_cands{params.u.u1.lo, params.u.u1.hi};
  if (params.u.u1.contains(std::numbers::pi / 2)) u1_cands.push_back(std::numbers::pi / 2);
  std::vector<double> u2_cands{params.u.u2.lo, params.u.u2.hi};
  if (params.u.u2.contains(0.0)) u2_cands.push_back(0.0);
  const std::vector<double> c_cands{params.c.lo, params.c.hi};

  std::vector<double> thetas;
  for (int k = 0; k < theta_candidates; ++k) {
    thetas.push_back(-std::numbers::pi + 2.0 * std::numbers::pi * k / theta_candidates);
  }

  std::vector<double> next(n);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double residual = 0.0;
    for (std::size_t flat = 0; flat < n; ++flat) {
      const auto idx = spec.unflatten(flat);
      RelativeState r{spec.axes[0].coord(idx[0]), spec.axes[1].coord(idx[1]),
                      spec.axes[2].coord(idx[2]), spec.axes[3].coord(idx[3])};

      // Heading is worst case OUTSIDE the tracker's choice: the tracker sees
      // the heading and best-responds, matching the production Hamiltonian.
      double worst_theta = -std::numeric_limits<double>::infinity();
      TrackerControl u_at_worst;
      double margin_at_worst = 0.0;
      for (double theta : thetas) {
        double best = std::numeric_limits<double>::infinity();
        double second = best;
        TrackerControl best_u;
        for (double u1 : u1_cands) {
          for (double u2 : u2_cands) {
            double worst_c = -std::numeric_limits<double>::infinity();
            for (double c : c_cands) {
              const auto f = relative_derivative(r, {u1, u2, params.g}, {c}, theta, params);
              std::array<double, 4> x{r.d + step * f[0], r.psi + step * f[1],
                                      r.vT + step * f[2], r.vN + step * f[3]};
              x[0] = std::max(x[0], 0.0);
              worst_c = std::max(worst_c, out.value.interpolate(x));
            }
            if (worst_c < best) {
              second = best;
              best = worst_c;
              best_u = {u1, u2, params.g};
            } else if (worst_c < second) {
              second = worst_c;
            }
          }
        }
        if (best > worst_theta) {
          worst_theta = best;
          u_at_worst = best_u;
          margin_at_worst = second - best;
        }
      }
      const double updated = std::max(stage[flat], worst_theta);
      residual = std::max(residual, std::abs(updated - out.value.values[flat]));
      next[flat] = updated;
      out.argmin[flat] = u_at_worst;
      out.argmin_margin[flat] = margin_at_worst;
    }
    out.value.values.swap(next);
    if (residual < 1e-6) break;
  }
  return out;
}

}  // namespace rfplan::test_oracle
