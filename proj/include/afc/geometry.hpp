#pragma once

#include <array>
#include <cmath>

namespace afc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

using Vec2 = Point2;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

// Twice the signed area of (a, b, c); positive for counterclockwise order.
inline double orient2d(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

// Barycentric coordinates of p with respect to the triangle (a, b, c).
inline std::array<double, 3> barycentric(Point2 a, Point2 b, Point2 c, Point2 p) {
  const double det = orient2d(a, b, c);
  return {orient2d(p, b, c) / det, orient2d(a, p, c) / det, orient2d(a, b, p) / det};
}

// Euclidean distance from p to the closed segment [a, b].
inline double segment_distance(Point2 p, Point2 a, Point2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(p - a);
  double t = dot(p - a, ab) / len2;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return norm(p - (a + t * ab));
}

struct Circle {
  Point2 center;
  double radius = 1.0;
};

}  // namespace afc
