#pragma once

#include <vector>

#include "specstab/geometry/domain.hpp"

namespace specstab {

/// A family of boundary balls B(x_i, r) with pairwise center distance >= r/5, so that the
/// balls B(x_i, r/10) are disjoint, and every boundary point lies within r/5 of a center,
/// so that B(x, 4r/5) is inside the union for every boundary point x.
struct Covering {
  std::vector<Point> centers;
  double radius = 0.0;
  int count = 0;
  /// count * radius / perimeter
  double c_cov = 0.0;
};

/// Greedy walk along the boundary in arc-length order (outer ring, then holes); a point
/// becomes a center as soon as its distance to every accepted center reaches r/5.
Covering build_covering(const PolygonalDomain& d, double r);

/// theta_0..theta_n at x for the covering's explicit cut-offs. The values lie in [0,1]
/// and sum to one; theta_0 vanishes on the union of B(x_i, r) and equals one outside the
/// union of B(x_i, 2r); theta_i vanishes outside B(x_i, 2r).
std::vector<double> partition_of_unity(const Covering& cov, Point x);

/// Piecewise-linear profiles used by partition_of_unity.
double cutoff_outer(double t);  ///< 0 on [0,1], 2(t-1) on [1,3/2], 1 beyond
double cutoff_inner(double t);  ///< 1 on [0,3/2], -2(t-2) on [3/2,2], 0 beyond

}  // namespace specstab
