#pragma once

#include <cmath>
#include <numbers>

namespace rfplan {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }

  Vec2 rotated(double angle) const {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Unit vector at the given heading.
inline Vec2 heading_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

// Wraps an angle into [0, 2*pi).
inline double wrap_angle_positive(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a -= two_pi;
  return a;
}

// Absolute angular difference in [0, pi].
inline double angular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

struct Circle {
  Vec2 center;
  double radius = 0.0;

  bool contains(const Vec2& p) const { return distance(center, p) <= radius; }
};

// Axis-aligned planar box.
struct Box {
  Vec2 lo;
  Vec2 hi;

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double area() const { return width() * height(); }

  // True iff the disc of `margin` around p lies inside the box.
  bool contains(const Vec2& p, double margin = 0.0) const {
    return p.x - margin >= lo.x && p.x + margin <= hi.x && p.y - margin >= lo.y &&
           p.y + margin <= hi.y;
  }
};

}  // namespace rfplan
