#pragma once

#include <vector>

#include "specstab/geometry/domain.hpp"

namespace specstab {

class BoundaryIndex {
 public:
  explicit BoundaryIndex(std::vector<Segment> edges);

  /// Nearest edge to p; returns its distance and writes the edge id.
  double nearest(Point p, int* edge_out) const;
  /// Crossing-number parity of a ray from p towards +x.
  bool odd_crossings(Point p) const;
  /// Edge ids whose bounding boxes touch the cells overlapped by box.
  void candidates(const BoundingBox& box, std::vector<int>& out) const;

 private:
  int cell_x(double x) const;
  int cell_y(double y) const;

  std::vector<Segment> edges_;
  BoundingBox box_;
  int nx_ = 1;
  int ny_ = 1;
  double cw_ = 1.0;
  double ch_ = 1.0;
  std::vector<std::vector<int>> cells_;
  std::vector<std::vector<int>> rows_;
};

}  // namespace specstab
