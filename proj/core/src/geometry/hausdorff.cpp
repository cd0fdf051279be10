#include "specstab/geometry/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>

#include "specstab/error.hpp"

namespace specstab {

double default_resolution(const PolygonalDomain& a, const PolygonalDomain& b) {
  const auto& ba = a.bbox();
  const auto& bb = b.bbox();
  BoundingBox u{{std::min(ba.lo.x, bb.lo.x), std::min(ba.lo.y, bb.lo.y)},
                {std::max(ba.hi.x, bb.hi.x), std::max(ba.hi.y, bb.hi.y)}};
  return 1e-3 * u.diagonal();
}

namespace {

struct Cell {
  Point c;
  double half = 0.0;
  double upper = 0.0;
  bool operator<(const Cell& o) const { return upper < o.upper; }
};

}  // namespace

double directed_boundary_sup(const PolygonalDomain& inside, const PolygonalDomain& outside,
                             const PolygonalDomain& target, double resolution) {
  if (!(resolution > 0.0)) throw ValidationError("hausdorff: resolution must be positive");
  const BoundingBox& box = inside.bbox();
  const double half0 = 0.5 * std::max(box.width(), box.height()) + resolution;
  const Point c0 = (box.lo + box.hi) * 0.5;

  double best = 0.0;
  // Leaves are small enough that any point of a leaf is within resolution/4 of its center.
  const double leaf_half = resolution / (4.0 * std::sqrt(2.0));
  const double slack = 0.25 * resolution;

  std::priority_queue<Cell> queue;
  auto consider = [&](Point c, double half) {
    const double rho = half * std::sqrt(2.0);
    const double d_in = inside.signed_distance(c);
    if (d_in < -rho) return;
    const double d_out = outside.signed_distance(c);
    if (d_out > rho) return;
    const double g = (&target == &outside) ? std::abs(d_out)
                     : (&target == &inside) ? std::abs(d_in)
                                            : target.boundary_distance(c);
    if (d_in >= 0.0 && d_out <= 0.0) best = std::max(best, g);
    const double upper = g + rho;
    if (half > leaf_half && upper > best + slack) queue.push({c, half, upper});
  };

  consider(c0, half0);
  while (!queue.empty()) {
    const Cell cell = queue.top();
    queue.pop();
    if (cell.upper <= best + slack) break;
    const double h = 0.5 * cell.half;
    for (Point off : {Point{-h, -h}, Point{h, -h}, Point{-h, h}, Point{h, h}}) consider(cell.c + off, h);
  }
  return best;
}

double hausdorff_distance_sets(const PolygonalDomain& a, const PolygonalDomain& b, double resolution) {
  if (resolution <= 0.0) resolution = default_resolution(a, b);
  return std::max(directed_boundary_sup(a, b, b, resolution), directed_boundary_sup(b, a, a, resolution));
}

double hausdorff_distance_complements(const PolygonalDomain& a, const PolygonalDomain& b, double resolution) {
  if (resolution <= 0.0) resolution = default_resolution(a, b);
  return std::max(directed_boundary_sup(b, a, b, resolution), directed_boundary_sup(a, b, a, resolution));
}

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint, /*ClockWise=*/false, /*Closed=*/true>;
using BgMulti = bg::model::multi_polygon<BgPolygon>;

namespace {

BgPolygon to_boost(const PolygonalDomain& d) {
  BgPolygon poly;
  for (Point p : d.outer()) bg::append(poly.outer(), BgPoint(p.x, p.y));
  bg::append(poly.outer(), BgPoint(d.outer().front().x, d.outer().front().y));
  for (const auto& hole : d.holes()) {
    poly.inners().emplace_back();
    for (Point p : hole) bg::append(poly.inners().back(), BgPoint(p.x, p.y));
    bg::append(poly.inners().back(), BgPoint(hole.front().x, hole.front().y));
  }
  return poly;
}

}  // namespace

double symmetric_difference_area(const PolygonalDomain& a, const PolygonalDomain& b) {
  const BgPolygon pa = to_boost(a), pb = to_boost(b);
  BgMulti out;
  bg::sym_difference(pa, pb, out);
  return std::abs(bg::area(out));
}

}  // namespace specstab
