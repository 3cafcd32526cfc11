#pragma once

#include <cmath>
#include <numbers>

namespace pvortex {

inline constexpr double kPi = std::numbers::pi;

/// A point (or vector) in the plane.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2& operator+=(const Point2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Point2& operator-=(const Point2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Point2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Point2 operator+(Point2 a, const Point2& b) { return a += b; }
  friend constexpr Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
  friend constexpr Point2 operator-(const Point2& a) { return {-a.x, -a.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return a *= s; }
  friend constexpr Point2 operator*(Point2 a, double s) { return a *= s; }
  friend constexpr Point2 operator/(Point2 a, double s) { return a *= (1.0 / s); }
  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

constexpr double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
constexpr double norm2(const Point2& a) { return dot(a, a); }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline double arg(const Point2& a) { return std::atan2(a.y, a.x); }
inline bool is_finite(const Point2& a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Unit vector e(theta) = (cos theta, sin theta).
inline Point2 unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// The symplectic matrix J = [[0, 1], [-1, 0]] applied to v.
constexpr Point2 apply_J(const Point2& v) { return {v.y, -v.x}; }

/// Counter-clockwise quarter turn, equal to -J.
constexpr Point2 rot90(const Point2& v) { return {-v.y, v.x}; }

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct SymMat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  constexpr Point2 operator*(const Point2& v) const {
    return {xx * v.x + xy * v.y, xy * v.x + yy * v.y};
  }
  constexpr double det() const { return xx * yy - xy * xy; }
  constexpr double trace() const { return xx + yy; }
  constexpr double quadratic_form(const Point2& v) const { return dot(v, (*this) * v); }
  constexpr bool positive_definite() const { return xx > 0.0 && det() > 0.0; }

  friend constexpr SymMat2 operator*(double s, const SymMat2& m) {
    return {s * m.xx, s * m.xy, s * m.yy};
  }
  friend constexpr SymMat2 operator+(const SymMat2& a, const SymMat2& b) {
    return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy};
  }

  static constexpr SymMat2 identity() { return {1.0, 0.0, 1.0}; }
};

}  // namespace pvortex
