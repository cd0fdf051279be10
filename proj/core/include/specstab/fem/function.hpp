#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "specstab/fem/operators.hpp"

namespace specstab {

/// P1 function: one nodal value per mesh vertex.
class FEFunction {
 public:
  FEFunction() = default;
  FEFunction(std::shared_ptr<const TriMesh> mesh, Vector values);

  static FEFunction interpolate(std::shared_ptr<const TriMesh> mesh, const std::function<double(Point)>& f);

  const TriMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const TriMesh>& mesh_ptr() const { return mesh_; }
  const Vector& values() const { return values_; }

  /// Value at x, or nullopt outside the mesh.
  std::optional<double> eval(Point x) const;
  /// Constant gradient on triangle t.
  Point gradient(int t) const;

 private:
  std::shared_ptr<const TriMesh> mesh_;
  Vector values_;
};

/// Energy of u over B(center, r): triangles inside the disk count exactly, straddling ones
/// are split n_subdiv times into four and sub-triangles are kept by their centroid.
double region_energy(const FEFunction& u, Point center, double r, int n_subdiv = 5);

/// Same clipping with the weight |x - center|^-exponent at sub-triangle centroids. Exponent
/// 0 returns region_energy exactly; exponents >= 2 are not integrable in the plane.
double weighted_region_energy(const FEFunction& u, Point center, double r, double exponent, int n_subdiv = 5);

double sup_norm(const FEFunction& u);
double l2_norm(const FEFunction& u, const SparseSymOperator& M);

}  // namespace specstab
