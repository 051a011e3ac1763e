#include "rfplan/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rfplan {

RelativeState relative_state(const TrackerState& s, const PlannerState& p, double v) {
  const Vec2 tangent = heading_vector(p.theta);
  const Vec2 normal{-tangent.y, tangent.x};
  const Vec2 offset = s.position() - p.position();
  const Vec2 rel_vel = s.velocity() - v * tangent;

  RelativeState r;
  r.d = offset.norm();
  const double e_t = offset.dot(tangent);
  const double e_n = offset.dot(normal);
  r.psi = r.d > 0.0 ? wrap_angle(std::atan2(e_n, e_t)) : 0.0;
  r.vT = rel_vel.dot(tangent);
  r.vN = rel_vel.dot(normal);
  return r;
}

std::array<double, 4> relative_derivative(const RelativeState& r, const TrackerControl& u,
                                          const PlannerControl& c, double theta,
                                          const RelativeParams& params) {
  const double cps = std::cos(r.psi);
  const double sps = std::sin(r.psi);
  const double cth = std::cos(theta);
  const double sth = std::sin(theta);
  const double d_dot = r.vT * cps + r.vN * sps;

  if (params.form == RelativeDynamicsForm::kSimplified) {
    return {d_dot,
            -c.c - r.vT * sps + r.vN * cps,
            u.u1 * cth - u.u2 * sth + c.c * r.vT,
            -u.u1 * sth - u.u2 * cth - c.c * r.vT};
  }

  const double denom = std::max(r.d, params.d_epsilon > 0.0 ? params.d_epsilon : 1e-9);
  const double a_t = params.g * std::cos(u.u1);   // acceleration along world x
  const double a_n = -params.g * std::sin(u.u2);  // acceleration along world y
  return {d_dot,
          (r.vN * cps - r.vT * sps) / denom - c.c,
          a_t * cth + a_n * sth + c.c * r.vN,
          -a_t * sth + a_n * cth - c.c * (params.v + r.vT)};
}

namespace {

// Extremes of cos/sin over a closed interval, with an attaining argument.
struct FnExtreme {
  double value = 0.0;
  double arg = 0.0;
};

FnExtreme extreme_over(const Interval& iv, double (*fn)(double), bool want_max) {
  // Candidates: endpoints plus interior stationary points of cos/sin.
  static constexpr double kStationary[] = {0.0, std::numbers::pi, -std::numbers::pi,
                                           std::numbers::pi / 2.0, -std::numbers::pi / 2.0};
  FnExtreme best{fn(iv.lo), iv.lo};
  auto consider = [&](double x) {
    const double value = fn(x);
    if (want_max ? value > best.value : value < best.value) best = {value, x};
  };
  consider(iv.hi);
  for (double s : kStationary) {
    if (iv.contains(s)) consider(s);
  }
  return best;
}

// Precomputed control-optimization data shared by the solver and controller.
struct PlanarHamiltonian {
  RelativeDynamicsForm form;
  double v = 0.0;
  double g = 0.0;
  Interval c;
  Interval u1, u2;
  FnExtreme cos_min, cos_max;  // of cos(u1) over u1 interval
  FnExtreme sin_min, sin_max;  // of sin(u2) over u2 interval
  std::vector<double> cos_theta, sin_theta;

  explicit PlanarHamiltonian(const RelativeParams& p)
      : form(p.form), v(p.v), g(p.g), c(p.c), u1(p.u.u1), u2(p.u.u2) {
    cos_min = extreme_over(u1, std::cos, false);
    cos_max = extreme_over(u1, std::cos, true);
    sin_min = extreme_over(u2, std::sin, false);
    sin_max = extreme_over(u2, std::sin, true);
    const int n = std::max(1, p.theta_samples);
    cos_theta.resize(n);
    sin_theta.resize(n);
    for (int k = 0; k < n; ++k) {
      const double theta = -std::numbers::pi + 2.0 * std::numbers::pi * k / n;
      cos_theta[k] = std::cos(theta);
      sin_theta[k] = std::sin(theta);
    }
  }

  // min over u of the u-dependent Hamiltonian terms at a fixed heading.
  double min_u_terms(double p_vT, double p_vN, double cth, double sth) const {
    const double a = p_vT * cth - p_vN * sth;    // multiplies g*cos(u1) (or u1)
    const double b = -(p_vT * sth + p_vN * cth);  // multiplies g*sin(u2) (or u2)
    if (form == RelativeDynamicsForm::kSimplified) {
      return a * (a >= 0.0 ? u1.lo : u1.hi) + b * (b >= 0.0 ? u2.lo : u2.hi);
    }
    return g * (a * (a >= 0.0 ? cos_min.value : cos_max.value) +
                b * (b >= 0.0 ? sin_min.value : sin_max.value));
  }

  // Worst case over the heading samples.
  double max_theta_min_u(double p_vT, double p_vN) const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cos_theta.size(); ++k) {
      best = std::max(best, min_u_terms(p_vT, p_vN, cos_theta[k], sin_theta[k]));
    }
    return best;
  }

  // max over the turn-rate interval of its affine contribution.
  double max_c_term(double p_psi, double p_vT, double p_vN, double vT, double vN) const {
    const double k = form == RelativeDynamicsForm::kSimplified
                         ? -p_psi + (p_vT - p_vN) * vT
                         : -p_psi + p_vT * vN - p_vN * (v + vT);
    return std::max(c.lo * k, c.hi * k);
  }

  // Attaining controls (used by the runtime controller).
  TrackerControl argmin_u(double p_vT, double p_vN, double cth, double sth) const {
    const double a = p_vT * cth - p_vN * sth;
    const double b = -(p_vT * sth + p_vN * cth);
    TrackerControl u;
    if (form == RelativeDynamicsForm::kSimplified) {
      u.u1 = a >= 0.0 ? u1.lo : u1.hi;
      u.u2 = b >= 0.0 ? u2.lo : u2.hi;
    } else {
      u.u1 = a >= 0.0 ? cos_min.arg : cos_max.arg;
      u.u2 = b >= 0.0 ? sin_min.arg : sin_max.arg;
    }
    return u;
  }
};

struct LfAxisData {
  double h = 0.0;
  double alpha = 0.0;
  std::size_t stride = 0;
  int count = 0;
  bool periodic = false;
};

}  // namespace

ValueGrid solve_value(const GridSpec4& spec, const RelativeParams& params,
                      const SolveOptions& opts) {
  for (const AxisSpec& a : spec.axes) {
    if (a.count < 5) throw std::invalid_argument("solve_value: need >= 5 nodes per axis");
  }
  if (!spec.axes[1].periodic) {
    throw std::invalid_argument("solve_value: psi axis must be periodic");
  }

  RelativeParams p = params;
  if (p.d_epsilon <= 0.0) p.d_epsilon = spec.axes[0].step();
  const PlanarHamiltonian ham(p);

  const double vT_abs = std::max(std::abs(spec.axes[2].lo), std::abs(spec.axes[2].hi));
  const double vN_abs = std::max(std::abs(spec.axes[3].lo), std::abs(spec.axes[3].hi));
  const double speed = std::hypot(vT_abs, vN_abs);
  const double c_abs =
      std::max({std::abs(p.c.lo), std::abs(p.c.hi), opts.dissipation_turn_rate});
  const double cos_abs = std::max(std::abs(ham.cos_min.value), std::abs(ham.cos_max.value));
  const double sin_abs = std::max(std::abs(ham.sin_min.value), std::abs(ham.sin_max.value));
  const double accel_abs =
      p.form == RelativeDynamicsForm::kExact
          ? p.g * std::hypot(cos_abs, sin_abs)
          : std::hypot(std::max(std::abs(p.u.u1.lo), std::abs(p.u.u1.hi)),
                       std::max(std::abs(p.u.u2.lo), std::abs(p.u.u2.hi)));

  std::array<LfAxisData, 4> ax;
  for (int a = 0; a < 4; ++a) {
    ax[a].h = spec.axes[a].step();
    ax[a].count = spec.axes[a].count;
    ax[a].periodic = spec.axes[a].periodic;
  }
  ax[3].stride = 1;
  ax[2].stride = static_cast<std::size_t>(ax[3].count);
  ax[1].stride = ax[2].stride * ax[2].count;
  ax[0].stride = ax[1].stride * ax[1].count;

  ax[0].alpha = speed;
  if (p.form == RelativeDynamicsForm::kSimplified) {
    const double u1_abs = std::max(std::abs(p.u.u1.lo), std::abs(p.u.u1.hi));
    const double u2_abs = std::max(std::abs(p.u.u2.lo), std::abs(p.u.u2.hi));
    ax[1].alpha = speed + c_abs;
    ax[2].alpha = u1_abs + u2_abs + c_abs * vT_abs;
    ax[3].alpha = u1_abs + u2_abs + c_abs * vT_abs;
  } else {
    ax[1].alpha = speed / p.d_epsilon + c_abs;
    ax[2].alpha = p.g * (cos_abs + sin_abs) + c_abs * vN_abs;
    ax[3].alpha = p.g * (cos_abs + sin_abs) + c_abs * (p.v + vT_abs);
  }

  double alpha_sum = 0.0;
  for (const LfAxisData& a : ax) alpha_sum += a.alpha / a.h;
  const double dt = opts.cfl / alpha_sum;
  const double cap = opts.value_cap > 0.0 ? opts.value_cap : 2.0 * spec.axes[0].hi;

  const std::size_t n = spec.size();
  std::vector<double> value(n), next(n);
  std::vector<double> stage(n);
  std::vector<double> cos_psi(ax[1].count), sin_psi(ax[1].count);
  for (int j = 0; j < ax[1].count; ++j) {
    cos_psi[j] = std::cos(spec.axes[1].coord(j));
    sin_psi[j] = std::sin(spec.axes[1].coord(j));
  }
  for (std::size_t flat = 0; flat < n; ++flat) {
    stage[flat] = spec.axes[0].coord(static_cast<int>(flat / ax[0].stride));
    value[flat] = stage[flat];
  }

  const int n_threads = opts.threads > 0
                            ? opts.threads
                            : std::max(1u, std::thread::hardware_concurrency());

  auto sweep_range = [&](std::size_t begin, std::size_t end, double* residual_out) {
    double residual = 0.0;
    std::array<int, 4> idx = spec.unflatten(begin);
    for (std::size_t flat = begin; flat < end; ++flat) {
      const double v0 = value[flat];

      double p_minus[4], p_plus[4];
      for (int a = 0; a < 4; ++a) {
        const std::size_t s = ax[a].stride;
        const int i = idx[a];
        double lo_diff, hi_diff;
        if (ax[a].periodic) {
          const std::size_t prev = i == 0 ? flat + s * (ax[a].count - 1) : flat - s;
          const std::size_t next_i = i == ax[a].count - 1 ? flat - s * (ax[a].count - 1) : flat + s;
          lo_diff = (v0 - value[prev]) / ax[a].h;
          hi_diff = (value[next_i] - v0) / ax[a].h;
        } else if (i == 0) {
          hi_diff = (value[flat + s] - v0) / ax[a].h;
          lo_diff = hi_diff;  // linear-extrapolation ghost
        } else if (i == ax[a].count - 1) {
          lo_diff = (v0 - value[flat - s]) / ax[a].h;
          hi_diff = lo_diff;
        } else {
          lo_diff = (v0 - value[flat - s]) / ax[a].h;
          hi_diff = (value[flat + s] - v0) / ax[a].h;
        }
        p_minus[a] = lo_diff;
        p_plus[a] = hi_diff;
      }

      const double d = stage[flat];
      const double vT = spec.axes[2].coord(idx[2]);
      const double vN = spec.axes[3].coord(idx[3]);
      const double cps = cos_psi[idx[1]];
      const double sps = sin_psi[idx[1]];

      const double pb_d = 0.5 * (p_minus[0] + p_plus[0]);
      const double pb_psi = 0.5 * (p_minus[1] + p_plus[1]);
      const double pb_vT = 0.5 * (p_minus[2] + p_plus[2]);
      const double pb_vN = 0.5 * (p_minus[3] + p_plus[3]);

      const double cross = vN * cps - vT * sps;
      const double d_rate = vT * cps + vN * sps;
      double psi_rate_drift = cross;
      if (p.form == RelativeDynamicsForm::kExact) {
        psi_rate_drift = cross / std::max(d, p.d_epsilon);
      }
      const double drift = pb_d * d_rate + pb_psi * psi_rate_drift;

      // Local dissipation bounds on |dH/dp| at this node; the global bounds
      // in ax[].alpha only size the time step.
      double local_alpha[4];
      local_alpha[0] = std::abs(d_rate);
      local_alpha[1] = std::abs(psi_rate_drift) + c_abs;
      local_alpha[2] = accel_abs + c_abs * std::abs(vN);
      local_alpha[3] = accel_abs + c_abs * (p.form == RelativeDynamicsForm::kExact
                                                ? std::abs(p.v + vT)
                                                : std::abs(vT));

      double hamiltonian = drift + ham.max_c_term(pb_psi, pb_vT, pb_vN, vT, vN) +
                           ham.max_theta_min_u(pb_vT, pb_vN);
      double dissipation = 0.0;
      for (int a = 0; a < 4; ++a) {
        dissipation += local_alpha[a] * (p_plus[a] - p_minus[a]) * 0.5;
      }

      double updated = v0 + dt * (hamiltonian + dissipation);
      updated = std::max(stage[flat], updated);
      updated = std::min(cap, updated);
      next[flat] = updated;
      residual = std::max(residual, std::abs(updated - v0));

      // advance the index odometer (last axis fastest)
      for (int a = 3; a >= 0; --a) {
        if (++idx[a] < ax[a].count) break;
        idx[a] = 0;
      }
    }
    *residual_out = residual;
  };

  double residual = std::numeric_limits<double>::infinity();
  int sweeps = 0;
  while (sweeps < opts.max_sweeps) {
    ++sweeps;
    residual = 0.0;
    if (n_threads <= 1) {
      sweep_range(0, n, &residual);
    } else {
      std::vector<double> partial(n_threads, 0.0);
      std::vector<std::thread> pool;
      const std::size_t chunk = (n + n_threads - 1) / n_threads;
      for (int t = 0; t < n_threads; ++t) {
        const std::size_t begin = std::min(n, t * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(sweep_range, begin, end, &partial[t]);
      }
      for (std::thread& th : pool) th.join();
      for (double r : partial) residual = std::max(residual, r);
    }
    value.swap(next);
    if (residual < opts.residual_tol) break;
  }

  if (residual >= opts.residual_tol) {
    std::ostringstream msg;
    msg << "solve_value: residual " << residual << " did not reach " << opts.residual_tol
        << " within " << sweeps << " sweeps (dt=" << dt << ", cap=" << cap << ")";
    throw std::runtime_error(msg.str());
  }

  ValueGrid out;
  out.field.spec = spec;
  out.field.values = std::move(value);
  out.converged_residual = residual;
  out.sweeps = sweeps;
  out.value_cap = cap;
  out.d_epsilon = p.d_epsilon;
  out.form = p.form;
  return out;
}

TrackerControl optimal_tracking_control(const ValueGrid& grid, const RelativeState& r,
                                        double theta, const RelativeParams& params,
                                        bool* clamped) {
  std::array<double, 4> x = r.as_array();
  bool was_clamped = false;
  for (int a = 0; a < 4; ++a) {
    const AxisSpec& ax = grid.field.spec.axes[a];
    if (ax.periodic) continue;
    if (x[a] < ax.lo) {
      x[a] = ax.lo;
      was_clamped = true;
    } else if (x[a] > ax.hi) {
      x[a] = ax.hi;
      was_clamped = true;
    }
  }
  if (clamped) *clamped = was_clamped;

  RelativeParams p = params;
  p.form = grid.form;
  const PlanarHamiltonian ham(p);
  const auto grad = grid.field.gradient(x);
  TrackerControl u = ham.argmin_u(grad[2], grad[3], std::cos(theta), std::sin(theta));
  u.u3 = params.u.u3.clamp(params.g);
  return u;
}

GridField<2> planar_min_value(const ValueGrid& grid) {
  const GridSpec4& spec = grid.field.spec;
  GridField<2> out;
  out.spec.axes = {spec.axes[0], spec.axes[1]};
  out.values.assign(out.spec.size(), std::numeric_limits<double>::infinity());
  const int nd = spec.axes[0].count, npsi = spec.axes[1].count;
  const int nvt = spec.axes[2].count, nvn = spec.axes[3].count;
  std::size_t flat = 0;
  for (int i = 0; i < nd; ++i) {
    for (int j = 0; j < npsi; ++j) {
      double& cell = out.values[static_cast<std::size_t>(i) * npsi + j];
      for (int k = 0; k < nvt; ++k) {
        for (int l = 0; l < nvn; ++l, ++flat) {
          cell = std::min(cell, grid.field.values[flat]);
        }
      }
    }
  }
  return out;
}

double value_cell_variation(const ValueGrid& grid, double level) {
  const GridSpec4& spec = grid.field.spec;
  const auto& values = grid.field.values;
  std::array<std::size_t, 4> stride;
  stride[3] = 1;
  stride[2] = static_cast<std::size_t>(spec.axes[3].count);
  stride[1] = stride[2] * spec.axes[2].count;
  stride[0] = stride[1] * spec.axes[1].count;

  double kappa = 0.0;
  const std::size_t n = spec.size();
  for (std::size_t flat = 0; flat < n; ++flat) {
    if (values[flat] > level) continue;
    const auto idx = spec.unflatten(flat);
    for (int a = 0; a < 4; ++a) {
      std::size_t other;
      if (idx[a] + 1 < spec.axes[a].count) {
        other = flat + stride[a];
      } else if (spec.axes[a].periodic) {
        other = flat - stride[a] * (spec.axes[a].count - 1);
      } else {
        continue;
      }
      kappa = std::max(kappa, std::abs(values[other] - values[flat]));
      if (idx[a] > 0) {
        kappa = std::max(kappa, std::abs(values[flat - stride[a]] - values[flat]));
      }
    }
  }
  return kappa;
}

TrackingBound extract_teb(const ValueGrid& grid, double level) {
  const GridField<2> planar = planar_min_value(grid);
  const AxisSpec& d_axis = planar.spec.axes[0];
  double radius = -1.0;
  for (int i = 0; i < d_axis.count; ++i) {
    for (int j = 0; j < planar.spec.axes[1].count; ++j) {
      if (planar.values[static_cast<std::size_t>(i) * planar.spec.axes[1].count + j] <= level) {
        radius = std::max(radius, d_axis.coord(i));
      }
    }
  }
  if (radius < 0.0) throw std::runtime_error("extract_teb: empty sublevel set");
  TrackingBound bound;
  bound.radius = std::max(radius, 1e-9);
  bound.level = level;
  return bound;
}

// --- Vertical subsystem -----------------------------------------------------

ZValueGrid solve_z_subsystem(const Interval& u3, double g, const ZGridSpec& spec,
                             const SolveOptions& opts) {
  if (!(u3.lo <= g && g <= u3.hi)) {
    throw std::runtime_error("solve_z_subsystem: thrust interval cannot hover");
  }
  for (const AxisSpec& a : spec.axes) {
    if (a.count < 5) throw std::invalid_argument("solve_z_subsystem: need >= 5 nodes per axis");
  }

  const double vz_abs = std::max(std::abs(spec.axes[1].lo), std::abs(spec.axes[1].hi));
  const double acc_abs = std::max(std::abs(u3.lo - g), std::abs(u3.hi - g));
  const double hz = spec.axes[0].step();
  const double hv = spec.axes[1].step();
  const double alpha_z = vz_abs;
  const double alpha_v = acc_abs;
  const double dt = opts.cfl / (alpha_z / hz + alpha_v / hv);
  const double z_abs = std::max(std::abs(spec.axes[0].lo), std::abs(spec.axes[0].hi));
  const double cap = opts.value_cap > 0.0 ? opts.value_cap : 2.0 * z_abs;

  const int nz = spec.axes[0].count, nv = spec.axes[1].count;
  const std::size_t n = spec.size();
  std::vector<double> value(n), next(n), stage(n);
  for (int i = 0; i < nz; ++i) {
    for (int j = 0; j < nv; ++j) {
      stage[static_cast<std::size_t>(i) * nv + j] = std::abs(spec.axes[0].coord(i));
    }
  }
  value = stage;

  double residual = std::numeric_limits<double>::infinity();
  int sweeps = 0;
  while (sweeps < opts.max_sweeps) {
    ++sweeps;
    residual = 0.0;
    for (int i = 0; i < nz; ++i) {
      for (int j = 0; j < nv; ++j) {
        const std::size_t flat = static_cast<std::size_t>(i) * nv + j;
        const double v0 = value[flat];
        double pm_z, pp_z, pm_v, pp_v;
        if (i == 0) {
          pp_z = (value[flat + nv] - v0) / hz;
          pm_z = pp_z;
        } else if (i == nz - 1) {
          pm_z = (v0 - value[flat - nv]) / hz;
          pp_z = pm_z;
        } else {
          pm_z = (v0 - value[flat - nv]) / hz;
          pp_z = (value[flat + nv] - v0) / hz;
        }
        if (j == 0) {
          pp_v = (value[flat + 1] - v0) / hv;
          pm_v = pp_v;
        } else if (j == nv - 1) {
          pm_v = (v0 - value[flat - 1]) / hv;
          pp_v = pm_v;
        } else {
          pm_v = (v0 - value[flat - 1]) / hv;
          pp_v = (value[flat + 1] - v0) / hv;
        }
        const double pb_z = 0.5 * (pm_z + pp_z);
        const double pb_v = 0.5 * (pm_v + pp_v);
        const double vz = spec.axes[1].coord(j);
        const double min_u = pb_v >= 0.0 ? pb_v * (u3.lo - g) : pb_v * (u3.hi - g);
        const double hamiltonian = pb_z * vz + min_u;
        // Local dissipation: |dH/dp_z| = |vz| exactly at this node.
        const double dissipation =
            std::abs(vz) * (pp_z - pm_z) * 0.5 + alpha_v * (pp_v - pm_v) * 0.5;
        double updated = v0 + dt * (hamiltonian + dissipation);
        updated = std::max(stage[flat], std::min(cap, updated));
        next[flat] = updated;
        residual = std::max(residual, std::abs(updated - v0));
      }
    }
    value.swap(next);
    if (residual < opts.residual_tol) break;
  }

  if (residual >= opts.residual_tol) {
    std::ostringstream msg;
    msg << "solve_z_subsystem: residual " << residual << " did not reach "
        << opts.residual_tol << " within " << sweeps << " sweeps";
    throw std::runtime_error(msg.str());
  }

  ZValueGrid out;
  out.field.spec = spec;
  out.field.values = std::move(value);
  out.converged_residual = residual;
  out.sweeps = sweeps;
  out.value_cap = cap;
  return out;
}

double optimal_vertical_thrust(const ZValueGrid& grid, double z, double vz,
                               const Interval& u3, double g) {
  std::array<double, 2> x{grid.field.spec.axes[0].coord(0), 0.0};
  x[0] = std::clamp(z, grid.field.spec.axes[0].lo, grid.field.spec.axes[0].hi);
  x[1] = std::clamp(vz, grid.field.spec.axes[1].lo, grid.field.spec.axes[1].hi);
  const auto grad = grid.field.gradient(x);
  if (grad[1] > 0.0) return u3.lo;
  if (grad[1] < 0.0) return u3.hi;
  return u3.clamp(g);
}

double z_extent_for_level(const ZValueGrid& grid, double level) {
  const ZGridSpec& spec = grid.field.spec;
  double extent = -1.0;
  for (int i = 0; i < spec.axes[0].count; ++i) {
    for (int j = 0; j < spec.axes[1].count; ++j) {
      if (grid.field.values[static_cast<std::size_t>(i) * spec.axes[1].count + j] <= level) {
        extent = std::max(extent, std::abs(spec.axes[0].coord(i)));
      }
    }
  }
  if (extent < 0.0) throw std::runtime_error("z_extent_for_level: empty sublevel set");
  return extent;
}

double z_value_cell_variation(const ZValueGrid& grid, double level) {
  const ZGridSpec& spec = grid.field.spec;
  const int nz = spec.axes[0].count, nv = spec.axes[1].count;
  double kappa = 0.0;
  for (int i = 0; i < nz; ++i) {
    for (int j = 0; j < nv; ++j) {
      const std::size_t flat = static_cast<std::size_t>(i) * nv + j;
      if (grid.field.values[flat] > level) continue;
      const double v0 = grid.field.values[flat];
      if (i + 1 < nz) kappa = std::max(kappa, std::abs(grid.field.values[flat + nv] - v0));
      if (i > 0) kappa = std::max(kappa, std::abs(grid.field.values[flat - nv] - v0));
      if (j + 1 < nv) kappa = std::max(kappa, std::abs(grid.field.values[flat + 1] - v0));
      if (j > 0) kappa = std::max(kappa, std::abs(grid.field.values[flat - 1] - v0));
    }
  }
  return kappa;
}

double select_invariant_z_level(const ZValueGrid& grid, const Interval& u3, double g) {
  const ZGridSpec& spec = grid.field.spec;
  double min_value = std::numeric_limits<double>::infinity();
  for (double v : grid.field.values) min_value = std::min(min_value, v);

  constexpr int kLadderSteps = 16;
  const double hi = 0.9 * grid.value_cap;
  for (int step = 1; step <= kLadderSteps; ++step) {
    const double level = min_value + (hi - min_value) * step / kLadderSteps;
    const double kappa = z_value_cell_variation(grid, level);
    bool ok = true;
    // Deterministic closed-loop check from every in-set node.
    for (int i = 0; i < spec.axes[0].count && ok; ++i) {
      for (int j = 0; j < spec.axes[1].count && ok; ++j) {
        if (grid.field.values[static_cast<std::size_t>(i) * spec.axes[1].count + j] > level) {
          continue;
        }
        double z = spec.axes[0].coord(i);
        double vz = spec.axes[1].coord(j);
        const double dt = 0.01;
        for (int k = 0; k < 600; ++k) {
          const double thrust = optimal_vertical_thrust(grid, z, vz, u3, g);
          // exact kinematics over the step (constant acceleration)
          const double acc = thrust - g;
          z += vz * dt + 0.5 * acc * dt * dt;
          vz += acc * dt;
          if (grid.value(z, vz) > level + kappa) {
            ok = false;
            break;
          }
        }
      }
    }
    if (ok) return level;
  }
  throw std::runtime_error("select_invariant_z_level: no level passed the closed-loop check");
}

// --- Adversarial rollouts ---------------------------------------------------

namespace {

PlannerState planner_rk4(const PlannerState& p, double c, double v, double h) {
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

TrackerState tracker_from_relative(const RelativeState& r, const PlannerState& p, double v) {
  const Vec2 tangent = heading_vector(p.theta);
  const Vec2 normal{-tangent.y, tangent.x};
  const Vec2 offset = r.d * Vec2{std::cos(r.psi), std::sin(r.psi)};
  const Vec2 world_offset = offset.x * tangent + offset.y * normal;
  const Vec2 world_vel = (v + r.vT) * tangent + r.vN * normal;
  TrackerState s;
  s.x = p.x + world_offset.x;
  s.y = p.y + world_offset.y;
  s.vx = world_vel.x;
  s.vy = world_vel.y;
  return s;
}

RolloutStats run_adversarial_rollouts(const ValueGrid& grid, const RelativeParams& params,
                                      double level, double kappa, const RolloutOptions& opts) {
  // In-set nodes to seed start states from.
  const GridSpec4& spec = grid.field.spec;
  std::vector<std::size_t> in_set;
  for (std::size_t flat = 0; flat < spec.size(); ++flat) {
    if (grid.field.values[flat] <= level) in_set.push_back(flat);
  }
  if (in_set.empty()) throw std::runtime_error("rollouts: empty sublevel set");

  Rng rng(opts.seed);
  RolloutStats stats;
  const int steps = std::max(1, static_cast<int>(std::lround(opts.horizon / opts.dt)));

  for (int run = 0; run < opts.count; ++run) {
    // Jittered in-set node, re-tested against the interpolated value.
    RelativeState r;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const auto idx = spec.unflatten(in_set[rng.uniform_index(in_set.size())]);
      std::array<double, 4> x{};
      for (int a = 0; a < 4; ++a) {
        const AxisSpec& ax = spec.axes[a];
        const double jitter = (rng.next_double() - 0.5) * ax.step();
        x[a] = ax.coord(idx[a]) + jitter;
        if (!ax.periodic) x[a] = std::clamp(x[a], ax.lo, ax.hi);
      }
      x[0] = std::max(x[0], 0.0);
      r = RelativeState{x[0], wrap_angle(x[1]), x[2], x[3]};
      if (grid.value(r) <= level) break;
    }

    PlannerState p{0.0, 0.0, wrap_angle(rng.uniform(-std::numbers::pi, std::numbers::pi))};
    TrackerState s = tracker_from_relative(r, p, params.v);

    bool violated = false;
    bool too_far = false;
    for (int step = 0; step < steps; ++step) {
      const RelativeState rel = relative_state(s, p, params.v);
      const double value = grid.value(rel);
      stats.max_value = std::max(stats.max_value, value);
      stats.max_distance = std::max(stats.max_distance, rel.d);
      if (value > level + kappa) violated = true;
      if (opts.distance_bound > 0.0 && rel.d > opts.distance_bound) too_far = true;

      const TrackerControl u = optimal_tracking_control(grid, rel, p.theta, params);
      const double c = rng.bernoulli(0.5) ? params.c.lo : params.c.hi;
      s = integrate_tracker_step(s, u, params.g, opts.dt);
      p = planner_rk4(p, c, params.v, opts.dt);
    }
    if (violated) ++stats.value_violations;
    if (too_far) ++stats.distance_violations;
    ++stats.runs;
  }
  return stats;
}

double select_invariant_level(const ValueGrid& grid, const RelativeParams& params,
                              const RolloutOptions& opts) {
  double min_value = std::numeric_limits<double>::infinity();
  for (double v : grid.field.values) min_value = std::min(min_value, v);

  // Geometric ladder: dense near the smallest usable level, sparse upward.
  // Levels adjacent to the cap are excluded; capped regions carry no
  // invariance information.
  const double lo = min_value + grid.field.spec.axes[0].step();
  const double hi = 0.75 * grid.value_cap;
  if (lo >= hi) throw std::runtime_error("select_invariant_level: degenerate value range");

  constexpr int kLadderSteps = 24;
  for (int i = 0; i <= kLadderSteps; ++i) {
    const double level = lo * std::pow(hi / lo, static_cast<double>(i) / kLadderSteps);
    const double kappa = value_cell_variation(grid, level);
    TrackingBound bound;
    try {
      bound = extract_teb(grid, level);
    } catch (const std::runtime_error&) {
      continue;
    }

    RolloutOptions screen = opts;
    screen.distance_bound = bound.radius + kappa;
    RolloutStats stats = run_adversarial_rollouts(grid, params, level, kappa, screen);
    if (stats.value_violations != 0 || stats.distance_violations != 0) continue;

    // Confirm at full strength before committing: the chosen level must hold
    // the same margins the runtime checks enforce.
    RolloutOptions confirm = screen;
    confirm.count = std::max(1000, opts.count);
    confirm.horizon = std::max(8.0, opts.horizon);
    confirm.dt = std::min(0.01, opts.dt);
    confirm.seed = opts.seed ^ 0xd1b54a32d192ed03ull;
    stats = run_adversarial_rollouts(grid, params, level, kappa, confirm);
    if (stats.value_violations == 0 && stats.distance_violations == 0) return level;
  }
  throw std::runtime_error("select_invariant_level: no level passed the rollout check");
}

std::uint64_t hash_relative_params(const RelativeParams& params, const GridSpec4& spec,
                                   const ZGridSpec& zspec) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix_bytes = [&h](const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  auto mix_double = [&](double x) { mix_bytes(&x, sizeof(x)); };
  auto mix_int = [&](std::int64_t x) { mix_bytes(&x, sizeof(x)); };

  mix_double(params.v);
  mix_double(params.g);
  mix_double(params.c.lo);
  mix_double(params.c.hi);
  mix_double(params.u.u1.lo);
  mix_double(params.u.u1.hi);
  mix_double(params.u.u2.lo);
  mix_double(params.u.u2.hi);
  mix_double(params.u.u3.lo);
  mix_double(params.u.u3.hi);
  mix_int(static_cast<std::int64_t>(params.form));
  mix_double(params.d_epsilon);
  mix_int(params.theta_samples);
  for (const AxisSpec& a : spec.axes) {
    mix_double(a.lo);
    mix_double(a.hi);
    mix_int(a.count);
    mix_int(a.periodic ? 1 : 0);
  }
  for (const AxisSpec& a : zspec.axes) {
    mix_double(a.lo);
    mix_double(a.hi);
    mix_int(a.count);
    mix_int(a.periodic ? 1 : 0);
  }
  return h;
}

}  // namespace rfplan
