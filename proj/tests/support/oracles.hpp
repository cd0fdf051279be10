#pragma once

// Brute-force reference computations used to freeze expected values. They read only the
// vertex lists of a domain and never call the library's geometric queries.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "specstab/geometry/domain.hpp"

namespace oracle {

using specstab::Point;
using specstab::PolygonalDomain;

inline double seg_dist(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy);
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - a.x - t * dx, p.y - a.y - t * dy);
}

inline std::vector<std::vector<Point>> rings_of(const PolygonalDomain& d) {
  std::vector<std::vector<Point>> r{d.outer()};
  for (const auto& h : d.holes()) r.push_back(h);
  return r;
}

inline double boundary_dist(const PolygonalDomain& d, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ring : rings_of(d))
    for (size_t i = 0; i < ring.size(); ++i) best = std::min(best, seg_dist(p, ring[i], ring[(i + 1) % ring.size()]));
  return best;
}

inline bool inside(const PolygonalDomain& d, Point p) {
  bool in = false;
  for (const auto& ring : rings_of(d))
    for (size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
      const Point a = ring[i], b = ring[j];
      if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
    }
  return in;
}

/// Uniform grid over [lo, hi] with spacing `step`, callback per node.
inline void grid(Point lo, Point hi, double step, const std::function<void(Point)>& f) {
  const int nx = static_cast<int>(std::ceil((hi.x - lo.x) / step));
  const int ny = static_cast<int>(std::ceil((hi.y - lo.y) / step));
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) f({lo.x + i * step, lo.y + j * step});
}

/// Grid sampling of sup over (a \ b) of d(., bdry target).
inline double directed_sup(const PolygonalDomain& a, const PolygonalDomain& b, const PolygonalDomain& target,
                           double step) {
  double best = 0.0;
  grid(a.bbox().lo, a.bbox().hi, step, [&](Point p) {
    if (inside(a, p) && !inside(b, p)) best = std::max(best, boundary_dist(target, p));
  });
  return best;
}

/// Two-sided normalized distance between the boundary in B(x,r) and the line through x
/// with direction `angle`, by dense sampling of both sets.
inline double line_flatness(const PolygonalDomain& d, Point x, double r, double angle, int samples) {
  const Point u{std::cos(angle), std::sin(angle)};
  std::vector<Point> bdry;
  for (const auto& ring : rings_of(d))
    for (size_t i = 0; i < ring.size(); ++i) {
      const Point a = ring[i], b = ring[(i + 1) % ring.size()];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      const int n = std::max(2, static_cast<int>(len / r * samples));
      for (int k = 0; k <= n; ++k) {
        const Point p{a.x + (b.x - a.x) * k / n, a.y + (b.y - a.y) * k / n};
        if (std::hypot(p.x - x.x, p.y - x.y) <= r) bdry.push_back(p);
      }
    }
  double h = 0.0;
  for (Point p : bdry) h = std::max(h, std::abs(-(p.x - x.x) * u.y + (p.y - x.y) * u.x));
  for (int k = 0; k <= samples; ++k) {
    const double t = -r + 2.0 * r * k / samples;
    const Point q{x.x + u.x * t, x.y + u.y * t};
    double m = std::numeric_limits<double>::infinity();
    for (Point p : bdry) m = std::min(m, std::hypot(p.x - q.x, p.y - q.y));
    h = std::max(h, m);
  }
  return h / r;
}

}  // namespace oracle
