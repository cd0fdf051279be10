#pragma once

#include <array>
#include <iosfwd>
#include <tuple>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "specstab/meshing/trimesh.hpp"

namespace specstab {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Symmetric sparse matrix stored with both triangles.
class SparseSymOperator {
 public:
  SparseSymOperator() = default;
  /// Throws ValidationError unless the matrix is square and symmetric (1e-14 relative).
  explicit SparseSymOperator(SparseMatrix m);

  int dimension() const { return static_cast<int>(m_.rows()); }
  const SparseMatrix& matrix() const { return m_; }
  /// All stored (row, col, value) entries in column-major order.
  std::vector<std::tuple<int, int, double>> triplets() const;
  /// One "i j value" line per stored entry.
  void write_triplets(std::ostream& os) const;
  double entry_sum() const;
  /// u^T A v.
  double form(const Vector& u, const Vector& v) const { return u.dot(m_ * v); }

 private:
  SparseMatrix m_;
};

/// Gradients of the three barycentric basis functions of triangle t (constant per triangle).
std::array<Point, 3> basis_gradients(const TriMesh& m, int t);

SparseSymOperator assemble_stiffness(const TriMesh& m);
/// Consistent mass matrix: local (area/12) [[2,1,1],[1,2,1],[1,1,2]].
SparseSymOperator assemble_mass(const TriMesh& m);

/// Operators restricted to the interior vertices, with the maps to re-embed by zero extension.
struct DirichletSystem {
  SparseSymOperator K0;
  SparseSymOperator M0;
  std::vector<int> interior;          ///< reduced index -> vertex
  std::vector<int> full_to_reduced;   ///< vertex -> reduced index, -1 on the boundary

  Vector extend(const Vector& reduced) const;
  Vector restrict(const Vector& full) const;
};

/// Throws ValidationError("mesh too coarse") when the mesh has no interior vertex.
DirichletSystem restrict_dirichlet(const SparseSymOperator& K, const SparseSymOperator& M, const TriMesh& m);

}  // namespace specstab
