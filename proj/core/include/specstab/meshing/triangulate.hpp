#pragma once

#include "specstab/geometry/domain.hpp"
#include "specstab/meshing/trimesh.hpp"

namespace specstab {

struct MeshOptions {
  /// Upper bound on the circumradius to shortest-edge ratio; sqrt(2) gives angles >= 20.7 deg.
  double max_radius_edge = 1.4142135623730951;
  /// Stop with an error after this many inserted vertices (0 picks a bound from area / h^2).
  long max_vertices = 0;
};

/// Conforming Delaunay refinement of the domain: every edge at most h long and every
/// triangle angle at least about 20.7 degrees, except next to input corners that are
/// themselves sharper. Polygon vertices keep their order as the first mesh vertices.
TriMesh triangulate(const PolygonalDomain& d, double h, const MeshOptions& opts = {});

}  // namespace specstab
