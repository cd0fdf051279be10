#pragma once

#include <memory>
#include <string>
#include <vector>

#include "specstab/geometry/point.hpp"

namespace specstab {

using Ring = std::vector<Point>;

struct Segment {
  Point a;
  Point b;
  int ring = 0;  ///< 0 = outer, k > 0 = hole k-1
  int index = 0;  ///< edge index within its ring (edge i joins vertex i and i+1)
};

/// Uniform bin grid over boundary edges; answers nearest-edge and ray-crossing queries.
class BoundaryIndex;

/// A bounded open polygonal set: one counterclockwise outer ring and zero or more
/// clockwise holes. Construction validates simplicity and rejects degenerate inputs
/// (near-duplicate vertices, slivers) with tolerance 1e-12 * Diam.
class PolygonalDomain {
 public:
  PolygonalDomain(std::string name, Ring outer, std::vector<Ring> holes = {});

  const std::string& name() const { return name_; }
  const Ring& outer() const { return outer_; }
  const std::vector<Ring>& holes() const { return holes_; }
  /// Outer ring followed by holes.
  std::vector<const Ring*> rings() const;
  const std::vector<Segment>& edges() const { return edges_; }

  double area() const { return area_; }
  double perimeter() const { return perimeter_; }
  double diameter() const { return diameter_; }
  const BoundingBox& bbox() const { return bbox_; }
  /// Validation tolerance (1e-12 * Diam).
  double tolerance() const { return 1e-12 * diameter_; }

  /// Crossing-number membership. Points exactly on the boundary may go either way;
  /// callers that care use boundary_distance.
  bool contains(Point p) const;
  /// Euclidean distance to the boundary.
  double boundary_distance(Point p) const;
  /// Positive inside, negative outside.
  double signed_distance(Point p) const;
  /// Closest boundary point and the edge it lies on.
  Point closest_boundary_point(Point p, int* edge = nullptr) const;

  /// Boundary point at arc-length s (wrapped), walking the outer ring then each hole.
  Point boundary_point(double s, int* edge = nullptr) const;
  /// n points equally spaced in arc length over the whole boundary.
  std::vector<Point> sample_boundary(int n) const;

  /// Ids of edges whose bounding boxes may meet the given box (superset).
  std::vector<int> edges_near(const BoundingBox& box) const;

  /// Inward unit normal of the given edge.
  Point inward_normal(int edge) const;

  PolygonalDomain translated(Point shift) const;
  PolygonalDomain scaled(double factor) const;

 private:
  void validate() const;

  std::string name_;
  Ring outer_;
  std::vector<Ring> holes_;
  std::vector<Segment> edges_;
  std::vector<double> edge_start_arclength_;
  double area_ = 0.0;
  double perimeter_ = 0.0;
  double diameter_ = 0.0;
  BoundingBox bbox_;
  std::shared_ptr<const BoundaryIndex> index_;
};

/// Signed area of a ring (positive when counterclockwise).
double signed_area(const Ring& ring);

/// True when the closed segments [a,b] and [c,d] intersect.
bool segments_intersect(Point a, Point b, Point c, Point d);

}  // namespace specstab
