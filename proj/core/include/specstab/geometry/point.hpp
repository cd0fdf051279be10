#pragma once

#include <array>
#include <cmath>

namespace specstab {

struct Point {
  double x = 0.0;
  double y = 0.0;

  constexpr Point() = default;
  constexpr Point(double px, double py) : x(px), y(py) {}

  constexpr Point operator+(Point o) const { return {x + o.x, y + o.y}; }
  constexpr Point operator-(Point o) const { return {x - o.x, y - o.y}; }
  constexpr Point operator*(double s) const { return {x * s, y * s}; }
  constexpr Point operator/(double s) const { return {x / s, y / s}; }
  constexpr Point& operator+=(Point o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Point&) const = default;
};

constexpr Point operator*(double s, Point p) { return p * s; }

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Twice the signed area of (a, b, c); positive when counterclockwise.
constexpr double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

/// Distance from p to the closed segment [a, b].
inline double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return distance(p, a + ab * t);
}

/// Closest point to p on the closed segment [a, b].
inline Point segment_closest(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return a + ab * t;
}

struct BoundingBox {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double diagonal() const { return std::hypot(width(), height()); }
  bool contains(Point p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
};

}  // namespace specstab
