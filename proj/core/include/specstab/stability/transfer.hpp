#pragma once

#include <memory>
#include <vector>

#include "specstab/fem/function.hpp"
#include "specstab/geometry/covering.hpp"
#include "specstab/stability/cross_mesh.hpp"

namespace specstab {

/// Local-mean disk used for one covering center.
struct TransferDisk {
  Point center;  ///< covering center x_i
  Point Y;       ///< disk center, 3 delta inside Omega_b
  double mean = 0.0;
  bool fallback = false;  ///< normal taken from the nearest edge (or neighbouring edges)
};

struct TransferResult {
  FEFunction u;
  std::vector<TransferDisk> disks;
};

/// Builds u~ = theta_0 1_b u_b + sum_i m_i theta_i at the vertices of mesh_a, where m_i is the
/// mean of u_b over B(Y_i, delta) and Y_i lies 3 delta inside Omega_b along the normal of the
/// best line through x_i at scale 5 delta. The covering must have radius 5 delta / 2.
TransferResult neumann_transfer_detailed(const FEFunction& u_b, const PolygonalDomain& dom_a,
                                         const PolygonalDomain& dom_b, const Covering& cov, double delta,
                                         std::shared_ptr<const TriMesh> mesh_a);

FEFunction neumann_transfer(const FEFunction& u_b, const PolygonalDomain& dom_a, const PolygonalDomain& dom_b,
                            const Covering& cov, double delta, std::shared_ptr<const TriMesh> mesh_a);

/// ||1_a v - 1_b u||^2 + ||1_a grad v - 1_b grad u||^2 with cross matrices of (mesh of v, mesh of u).
double combined_distance(const FEFunction& v_a, const FEFunction& u_b, const CrossMatrices& cross);

}  // namespace specstab
