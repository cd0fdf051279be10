#pragma once

#include "specstab/geometry/domain.hpp"

namespace specstab {

/// Default sampling resolution: 1e-3 of the bounding-box diagonal of a union b.
double default_resolution(const PolygonalDomain& a, const PolygonalDomain& b);

/// sup of d(x, boundary of `target`) over the closure of (inside \ outside), computed by
/// branch-and-bound over a quadtree of cells; the returned value is within `resolution`
/// of the supremum. Returns 0 when the difference is empty.
double directed_boundary_sup(const PolygonalDomain& inside, const PolygonalDomain& outside,
                             const PolygonalDomain& target, double resolution);

/// d_H(closure a, closure b). resolution <= 0 selects default_resolution.
double hausdorff_distance_sets(const PolygonalDomain& a, const PolygonalDomain& b, double resolution = 0.0);

/// d_H(a^c, b^c) = max(sup over b\a of d(., bdry b), sup over a\b of d(., bdry a)).
double hausdorff_distance_complements(const PolygonalDomain& a, const PolygonalDomain& b, double resolution = 0.0);

/// |a symmetric-difference b|, exact polygon boolean operations.
double symmetric_difference_area(const PolygonalDomain& a, const PolygonalDomain& b);

}  // namespace specstab
