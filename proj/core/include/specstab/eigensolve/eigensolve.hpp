#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "specstab/fem/function.hpp"

namespace specstab {

enum class BoundaryKind { Dirichlet, Neumann };

const char* to_string(BoundaryKind k);

struct EigenOptions {
  /// Relative residual target: ||K u - lambda M u|| <= tol (1 + lambda) ||M u||.
  double tol = 1e-9;
  /// Block width of the Krylov iteration; must exceed the largest multiplicity of interest.
  int block = 3;
  /// Block steps allowed before giving up (0 means 50 n).
  int max_iterations = 0;
  std::uint64_t seed = 20240611;
};

/// First n eigencouples on one mesh. Eigenvalues are lambda for Dirichlet problems and mu
/// for Neumann problems; vectors are M-orthonormal nodal vectors on all mesh vertices
/// (zero on the boundary for Dirichlet).
struct EigenSet {
  BoundaryKind kind = BoundaryKind::Dirichlet;
  std::vector<double> eigenvalues;
  std::vector<FEFunction> eigenvectors;
  std::vector<double> residuals;
  std::shared_ptr<const TriMesh> mesh;
  int iterations = 0;  ///< block steps used
};

/// Smallest n eigenpairs of A x = nu B x for SPD A and B, by shift-invert block Lanczos
/// (operator A^-1 B) with full B-orthogonalization. Columns of the result are
/// B-orthonormal; `values` are Rayleigh quotients x^T A x.
struct GeneralizedEigenResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  std::vector<double> residuals;
  int iterations = 0;
};
GeneralizedEigenResult smallest_eigenpairs(const SparseMatrix& A, const SparseMatrix& B, int n,
                                           const EigenOptions& opts = {});

EigenSet solve_dirichlet(std::shared_ptr<const TriMesh> mesh, int n, const EigenOptions& opts = {});
EigenSet solve_neumann(std::shared_ptr<const TriMesh> mesh, int n, const EigenOptions& opts = {});

/// u^T K u / u^T M u; throws ValidationError when u has zero M-norm.
double rayleigh_quotient(const Vector& u, const SparseSymOperator& K, const SparseSymOperator& M);
double rayleigh_quotient(const FEFunction& u, const SparseSymOperator& K, const SparseSymOperator& M);

}  // namespace specstab
