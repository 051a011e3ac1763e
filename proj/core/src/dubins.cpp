#include "rfplan/dubins.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfplan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Seg { kLeft, kStraight, kRight };

std::array<Seg, 3> word_segments(DubinsWord w) {
  switch (w) {
    case DubinsWord::kLSL: return {Seg::kLeft, Seg::kStraight, Seg::kLeft};
    case DubinsWord::kRSR: return {Seg::kRight, Seg::kStraight, Seg::kRight};
    case DubinsWord::kLSR: return {Seg::kLeft, Seg::kStraight, Seg::kRight};
    case DubinsWord::kRSL: return {Seg::kRight, Seg::kStraight, Seg::kLeft};
    case DubinsWord::kRLR: return {Seg::kRight, Seg::kLeft, Seg::kRight};
    case DubinsWord::kLRL: return {Seg::kLeft, Seg::kRight, Seg::kLeft};
  }
  return {Seg::kLeft, Seg::kStraight, Seg::kLeft};
}

// Advances a pose along one segment by normalized length ell (R-scaled).
PlannerState apply_segment(const PlannerState& p, Seg seg, double ell, double R) {
  PlannerState out;
  switch (seg) {
    case Seg::kStraight:
      out.x = p.x + R * ell * std::cos(p.theta);
      out.y = p.y + R * ell * std::sin(p.theta);
      out.theta = p.theta;
      break;
    case Seg::kLeft:
      out.x = p.x + R * (std::sin(p.theta + ell) - std::sin(p.theta));
      out.y = p.y - R * (std::cos(p.theta + ell) - std::cos(p.theta));
      out.theta = wrap_angle(p.theta + ell);
      break;
    case Seg::kRight:
      out.x = p.x - R * (std::sin(p.theta - ell) - std::sin(p.theta));
      out.y = p.y + R * (std::cos(p.theta - ell) - std::cos(p.theta));
      out.theta = wrap_angle(p.theta - ell);
      break;
  }
  return out;
}

struct WordInputs {
  double d = 0.0;      // endpoint distance / R
  double alpha = 0.0;  // start heading relative to the endpoint chord
  double beta = 0.0;   // end heading relative to the endpoint chord
  double sa, ca, sb, cb, cab;
};

std::optional<std::array<double, 3>> solve_word(DubinsWord w, const WordInputs& in) {
  const double d = in.d;
  switch (w) {
    case DubinsWord::kLSL: {
      const double tmp0 = d + in.sa - in.sb;
      double p_sq = 2.0 + d * d - 2.0 * in.cab + 2.0 * d * (in.sa - in.sb);
      if (p_sq < 0.0) p_sq = 0.0;  // algebraically a sum of squares
      const double tmp1 = std::atan2(in.cb - in.ca, tmp0);
      return std::array<double, 3>{wrap_angle_positive(tmp1 - in.alpha), std::sqrt(p_sq),
                                   wrap_angle_positive(in.beta - tmp1)};
    }
    case DubinsWord::kRSR: {
      const double tmp0 = d - in.sa + in.sb;
      double p_sq = 2.0 + d * d - 2.0 * in.cab + 2.0 * d * (in.sb - in.sa);
      if (p_sq < 0.0) p_sq = 0.0;
      const double tmp1 = std::atan2(in.ca - in.cb, tmp0);
      return std::array<double, 3>{wrap_angle_positive(in.alpha - tmp1), std::sqrt(p_sq),
                                   wrap_angle_positive(tmp1 - in.beta)};
    }
    case DubinsWord::kLSR: {
      const double p_sq =
          -2.0 + d * d + 2.0 * in.cab + 2.0 * d * (in.sa + in.sb);
      if (p_sq < 0.0) return std::nullopt;
      const double p = std::sqrt(p_sq);
      const double tmp0 =
          std::atan2(-in.ca - in.cb, d + in.sa + in.sb) - std::atan2(-2.0, p);
      return std::array<double, 3>{wrap_angle_positive(tmp0 - in.alpha), p,
                                   wrap_angle_positive(tmp0 - wrap_angle_positive(in.beta))};
    }
    case DubinsWord::kRSL: {
      const double p_sq =
          d * d - 2.0 + 2.0 * in.cab - 2.0 * d * (in.sa + in.sb);
      if (p_sq < 0.0) return std::nullopt;
      const double p = std::sqrt(p_sq);
      const double tmp0 =
          std::atan2(in.ca + in.cb, d - in.sa - in.sb) - std::atan2(2.0, p);
      return std::array<double, 3>{wrap_angle_positive(in.alpha - tmp0), p,
                                   wrap_angle_positive(in.beta - tmp0)};
    }
    case DubinsWord::kRLR: {
      const double tmp0 =
          (6.0 - d * d + 2.0 * in.cab + 2.0 * d * (in.sa - in.sb)) / 8.0;
      if (std::abs(tmp0) > 1.0) return std::nullopt;
      const double phi = std::atan2(in.ca - in.cb, d - in.sa + in.sb);
      const double p = wrap_angle_positive(kTwoPi - std::acos(tmp0));
      const double t = wrap_angle_positive(in.alpha - phi + wrap_angle_positive(p / 2.0));
      return std::array<double, 3>{
          t, p, wrap_angle_positive(in.alpha - in.beta - t + wrap_angle_positive(p))};
    }
    case DubinsWord::kLRL: {
      const double tmp0 =
          (6.0 - d * d + 2.0 * in.cab + 2.0 * d * (in.sb - in.sa)) / 8.0;
      if (std::abs(tmp0) > 1.0) return std::nullopt;
      const double phi = std::atan2(in.ca - in.cb, d + in.sa - in.sb);
      const double p = wrap_angle_positive(kTwoPi - std::acos(tmp0));
      const double t = wrap_angle_positive(-in.alpha - phi + p / 2.0);
      return std::array<double, 3>{
          t, p,
          wrap_angle_positive(wrap_angle_positive(in.beta) - in.alpha - t +
                              wrap_angle_positive(p))};
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<DubinsPath> dubins_candidates(const PlannerState& from, const PlannerState& to,
                                          double R) {
  if (R <= 0.0) throw std::invalid_argument("dubins: turn radius must be positive");
  if (!from.finite() || !to.finite() || !std::isfinite(R)) {
    throw std::invalid_argument("dubins: non-finite input");
  }

  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const double chord_angle = std::atan2(dy, dx);
  WordInputs in;
  in.d = std::hypot(dx, dy) / R;
  in.alpha = wrap_angle_positive(from.theta - chord_angle);
  in.beta = wrap_angle_positive(to.theta - chord_angle);
  in.sa = std::sin(in.alpha);
  in.ca = std::cos(in.alpha);
  in.sb = std::sin(in.beta);
  in.cb = std::cos(in.beta);
  in.cab = std::cos(in.alpha - in.beta);

  static constexpr DubinsWord kWords[] = {DubinsWord::kLSL, DubinsWord::kRSR,
                                          DubinsWord::kLSR, DubinsWord::kRSL,
                                          DubinsWord::kRLR, DubinsWord::kLRL};
  std::vector<DubinsPath> out;
  out.reserve(6);
  for (DubinsWord w : kWords) {
    if (auto seg = solve_word(w, in)) {
      out.push_back(DubinsPath{w, *seg, R});
    }
  }
  return out;
}

DubinsPath dubins_shortest(const PlannerState& from, const PlannerState& to, double R) {
  const auto candidates = dubins_candidates(from, to, R);
  const DubinsPath* best = &candidates.front();
  for (const DubinsPath& c : candidates) {
    if (c.length() < best->length()) best = &c;
  }
  return *best;
}

Trajectory dubins_trajectory(const PlannerState& from, const DubinsPath& path, double v,
                             double dt, double start_time) {
  if (v <= 0.0 || dt <= 0.0) {
    throw std::invalid_argument("dubins_trajectory: v and dt must be positive");
  }
  const auto segs = word_segments(path.word);
  const double R = path.radius;

  // Poses at segment starts, advanced exactly.
  std::array<PlannerState, 4> joints;
  joints[0] = from;
  joints[0].theta = wrap_angle(joints[0].theta);
  for (int i = 0; i < 3; ++i) joints[i + 1] = apply_segment(joints[i], segs[i], path.seg[i], R);

  const double total = path.seg[0] + path.seg[1] + path.seg[2];  // normalized
  const double duration = total * R / v;

  auto turn_rate = [&](Seg s) {
    switch (s) {
      case Seg::kLeft: return v / R;
      case Seg::kRight: return -v / R;
      default: return 0.0;
    }
  };

  // State at normalized arc length sigma in [0, total].
  auto eval = [&](double sigma) -> std::pair<PlannerState, int> {
    double remaining = sigma;
    for (int i = 0; i < 3; ++i) {
      if (remaining <= path.seg[i] || i == 2) {
        return {apply_segment(joints[i], segs[i], std::min(remaining, path.seg[i]), R), i};
      }
      remaining -= path.seg[i];
    }
    return {joints[3], 2};
  };

  Trajectory traj;
  traj.start_time = start_time;
  if (duration <= 0.0) {
    traj.samples.push_back({start_time, joints[0], PlannerControl{0.0}});
    return traj;
  }

  // Sample times: a uniform grid no coarser than dt plus segment boundaries.
  std::vector<double> times;
  const int n = std::max(1, static_cast<int>(std::ceil(duration / dt - 1e-12)));
  const double h = duration / n;
  for (int i = 0; i <= n; ++i) times.push_back(i * h);
  double boundary = 0.0;
  for (int i = 0; i < 2; ++i) {
    boundary += path.seg[i] * R / v;
    if (boundary > 1e-12 && boundary < duration - 1e-12) times.push_back(boundary);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              times.end());

  for (std::size_t i = 0; i < times.size(); ++i) {
    const double sigma = times[i] * v / R;
    auto [state, seg_idx] = eval(sigma);
    // Control for the interval ahead: segment containing the midpoint to the
    // next sample, so switch samples carry the upcoming segment's rate.
    int ctrl_seg = seg_idx;
    if (i + 1 < times.size()) {
      ctrl_seg = eval(0.5 * (times[i] + times[i + 1]) * v / R).second;
    }
    traj.samples.push_back({start_time + times[i], state, PlannerControl{turn_rate(segs[ctrl_seg])}});
  }
  return traj;
}

std::optional<Trajectory> dubins_connect(const PlannerState& from, const PlannerState& to,
                                         double R, double v, double dt, double start_time) {
  if (R <= 0.0) throw std::invalid_argument("dubins_connect: turn radius must be positive");
  if (!from.finite() || !to.finite()) {
    throw std::invalid_argument("dubins_connect: non-finite pose");
  }
  if (states_match(from, to)) {
    Trajectory traj;
    traj.start_time = start_time;
    PlannerState p = from;
    p.theta = wrap_angle(p.theta);
    traj.samples.push_back({start_time, p, PlannerControl{0.0}});
    return traj;
  }
  return dubins_trajectory(from, dubins_shortest(from, to, R), v, dt, start_time);
}

}  // namespace rfplan
