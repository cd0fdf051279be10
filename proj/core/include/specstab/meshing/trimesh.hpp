#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specstab/geometry/point.hpp"

namespace specstab {

using Triangle = std::array<int, 3>;

/// Result of a point-location query.
struct Location {
  int triangle = -1;
  std::array<double, 3> bary{};
};

class LocateGrid;

/// Conforming triangulation with counterclockwise triangles and boundary vertex flags.
/// Immutable after construction; copies share the point-location grid.
class TriMesh {
 public:
  TriMesh() = default;
  /// Validates indices and orientation (every triangle must have positive area).
  TriMesh(std::vector<Point> vertices, std::vector<Triangle> triangles, std::vector<bool> boundary,
          double h_target = 0.0, std::string domain_ref = {});

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<bool>& boundary_flags() const { return boundary_; }
  double h_target() const { return h_target_; }
  const std::string& domain_ref() const { return domain_ref_; }

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_triangles() const { return static_cast<int>(triangles_.size()); }
  int n_interior() const;
  const BoundingBox& bbox() const { return bbox_; }

  double triangle_area(int t) const;
  double total_area() const;
  Point centroid(int t) const;
  /// Unique undirected edges (i < j), sorted.
  std::vector<std::array<int, 2>> edges() const;
  double max_edge() const;
  /// Smallest interior angle over all triangles, radians.
  double min_angle() const;
  /// Whether the vertex-adjacency graph of the triangles is connected.
  bool connected() const;

  /// Containing triangle (lowest index on ties) with barycentric coordinates, or nullopt.
  std::optional<Location> locate(Point x) const;

  /// Same topology with every coordinate multiplied by t.
  TriMesh scaled(double t) const;

 private:
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<bool> boundary_;
  double h_target_ = 0.0;
  std::string domain_ref_;
  BoundingBox bbox_;
  std::shared_ptr<const LocateGrid> grid_;
};

}  // namespace specstab
