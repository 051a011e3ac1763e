#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rfplan {

struct AxisSpec {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  bool periodic = false;

  // Node spacing. Periodic axes place `count` nodes over [lo, hi) so the
  // wrap-around gap equals the spacing.
  double step() const {
    if (count <= 1) return 0.0;
    return periodic ? (hi - lo) / count : (hi - lo) / (count - 1);
  }
  double coord(int i) const { return lo + step() * i; }
};

template <int N>
struct GridSpec {
  std::array<AxisSpec, N> axes;

  std::size_t size() const {
    std::size_t n = 1;
    for (const AxisSpec& a : axes) n *= static_cast<std::size_t>(a.count);
    return n;
  }

  // Row-major flattening, last axis fastest.
  std::size_t flatten(const std::array<int, N>& idx) const {
    std::size_t out = 0;
    for (int a = 0; a < N; ++a) out = out * axes[a].count + idx[a];
    return out;
  }

  std::array<int, N> unflatten(std::size_t flat) const {
    std::array<int, N> idx{};
    for (int a = N - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % axes[a].count);
      flat /= axes[a].count;
    }
    return idx;
  }
};

// Dense sampled field over a rectangular grid with multilinear interpolation.
template <int N>
struct GridField {
  GridSpec<N> spec;
  std::vector<double> values;

  double at(const std::array<int, N>& idx) const { return values[spec.flatten(idx)]; }

  // Multilinear interpolation; non-periodic axes clamp, periodic axes wrap.
  double interpolate(const std::array<double, N>& x) const {
    std::array<int, N> base{};
    std::array<double, N> w{};
    for (int a = 0; a < N; ++a) {
      const AxisSpec& ax = spec.axes[a];
      const double h = ax.step();
      if (ax.count <= 1 || h <= 0.0) {
        base[a] = 0;
        w[a] = 0.0;
        continue;
      }
      double u = (x[a] - ax.lo) / h;
      if (ax.periodic) {
        u = std::fmod(u, static_cast<double>(ax.count));
        if (u < 0.0) u += ax.count;
      } else {
        if (u < 0.0) u = 0.0;
        if (u > ax.count - 1) u = ax.count - 1;
      }
      int i = static_cast<int>(std::floor(u));
      if (!ax.periodic && i >= ax.count - 1) i = ax.count - 2;
      if (i < 0) i = 0;
      base[a] = i;
      w[a] = u - i;
    }

    double acc = 0.0;
    for (int corner = 0; corner < (1 << N); ++corner) {
      double weight = 1.0;
      std::array<int, N> idx{};
      for (int a = 0; a < N; ++a) {
        const AxisSpec& ax = spec.axes[a];
        const bool high = corner & (1 << a);
        weight *= high ? w[a] : 1.0 - w[a];
        int i = base[a] + (high ? 1 : 0);
        if (ax.periodic && i >= ax.count) i -= ax.count;
        if (i >= ax.count) i = ax.count - 1;
        idx[a] = i;
      }
      if (weight != 0.0) acc += weight * at(idx);
    }
    return acc;
  }

  // Central-difference gradient of the interpolated field with one-sided
  // fallback where the stencil would leave a non-periodic axis.
  std::array<double, N> gradient(const std::array<double, N>& x) const {
    std::array<double, N> g{};
    for (int a = 0; a < N; ++a) {
      const AxisSpec& ax = spec.axes[a];
      const double h = ax.step();
      if (h <= 0.0) continue;
      std::array<double, N> xl = x, xr = x;
      double span = 2.0 * h;
      if (ax.periodic) {
        xl[a] -= h;
        xr[a] += h;
      } else {
        xr[a] = std::min(x[a] + h, ax.hi);
        xl[a] = std::max(x[a] - h, ax.lo);
        span = xr[a] - xl[a];
        if (span <= 0.0) continue;
      }
      g[a] = (interpolate(xr) - interpolate(xl)) / span;
    }
    return g;
  }
};

}  // namespace rfplan
