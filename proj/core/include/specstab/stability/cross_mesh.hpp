#pragma once

#include "specstab/fem/operators.hpp"

namespace specstab {

/// Coupling between the P1 spaces of two meshes over the intersection of their domains:
/// K(p, q) = int grad phi_p^a . grad phi_q^b and M(p, q) = int phi_p^a phi_q^b.
/// Rows index vertices of mesh a, columns vertices of mesh b.
struct CrossMatrices {
  SparseMatrix K;
  SparseMatrix M;
};

enum class CrossMethod {
  /// Exact: triangle-triangle intersection polygons, midpoint rule (exact for quadratics).
  Overlay,
  /// 7-point rule on sub-triangles of mesh a with point location on mesh b.
  Sampled,
};

struct CrossOptions {
  CrossMethod method = CrossMethod::Overlay;
  /// Subdivision depth for the sampled rule (each level splits triangles into four).
  int depth = 2;
};

CrossMatrices cross_matrices(const TriMesh& a, const TriMesh& b, const CrossOptions& opts = {});

}  // namespace specstab
