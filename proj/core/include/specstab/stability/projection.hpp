#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "specstab/eigensolve/eigensolve.hpp"
#include "specstab/stability/cross_mesh.hpp"

namespace specstab {

/// Constants of the eigenvalue comparison bound for one ordered pair (a projected from b).
/// For Neumann problems every eigenvalue is mu; the bound is stated for mu directly.
struct ProjectionReport {
  BoundaryKind kind = BoundaryKind::Dirichlet;
  int n = 0;
  double A_hat = 0.0;
  double B_hat = 0.0;
  bool feasible = false;
  std::vector<double> lambda_b;
  std::vector<double> lambda_a;        ///< empty until attach_true_spectrum
  std::vector<double> abstract_bound;  ///< +inf when infeasible
  /// (lambda_b + s) / (1 - sqrt B)^2 - s with s = 1 for Neumann and 0 for Dirichlet: the bound
  /// that follows from min-max and ||Pu||_H <= ||u||_H alone. +inf when infeasible.
  std::vector<double> minmax_bound;
  std::vector<double> true_gap;        ///< lambda_a - lambda_b
  /// Cross-quadrature error on each bound (0 for the exact overlay).
  std::vector<double> quadrature_budget;
  Eigen::MatrixXd gram_H;
  Eigen::MatrixXd gram_h;
};

/// lambda_b + A / (1 - sqrt B)^2; InfeasibleError unless 0 <= B < 1 and A >= 0.
double abstract_bound(double lambda_b, double A, double B);

/// Best approximation in V_a of functions on mesh b. Dirichlet: minimizes the energy of the
/// difference (zero extensions). Neumann: minimizes the combined value and gradient error of
/// the indicator-masked functions.
class Projector {
 public:
  Projector(BoundaryKind kind, std::shared_ptr<const TriMesh> mesh_a, std::shared_ptr<const TriMesh> mesh_b,
            const CrossOptions& opts = {});

  BoundaryKind kind() const { return kind_; }
  const CrossMatrices& cross() const { return cross_; }
  const SparseSymOperator& K_a() const { return K_a_; }
  const SparseSymOperator& M_a() const { return M_a_; }
  const SparseSymOperator& K_b() const { return K_b_; }
  const SparseSymOperator& M_b() const { return M_b_; }

  /// Columns are nodal vectors on mesh b; result columns are nodal vectors on mesh a.
  Eigen::MatrixXd project(const Eigen::MatrixXd& U) const;
  FEFunction project(const FEFunction& u_b) const;

  /// Gram matrices of the differences Pu_i - u_i in the H and h inner products.
  void gram(const Eigen::MatrixXd& U, const Eigen::MatrixXd& P, Eigen::MatrixXd& G_H, Eigen::MatrixXd& G_h) const;

 private:
  struct Factor;

  BoundaryKind kind_;
  std::shared_ptr<const TriMesh> mesh_a_;
  std::shared_ptr<const TriMesh> mesh_b_;
  SparseSymOperator K_a_, M_a_, K_b_, M_b_;
  CrossMatrices cross_;
  std::vector<int> interior_;         ///< Dirichlet: interior vertices of mesh a
  std::vector<int> full_to_reduced_;
  std::shared_ptr<const Factor> factor_;
};

/// Dirichlet projection of one function; builds a Projector internally.
FEFunction dirichlet_project(const FEFunction& u_b, std::shared_ptr<const TriMesh> mesh_a,
                             const CrossOptions& opts = {});

ProjectionReport projection_constants(const EigenSet& eigs_b, std::shared_ptr<const TriMesh> mesh_a,
                                      const CrossOptions& opts = {});
ProjectionReport projection_constants(const EigenSet& eigs_b, const Projector& projector);
ProjectionReport projection_constants_dirichlet(const EigenSet& eigs_b, std::shared_ptr<const TriMesh> mesh_a,
                                                const CrossOptions& opts = {});
ProjectionReport projection_constants_neumann(const EigenSet& eigs_b, std::shared_ptr<const TriMesh> mesh_a,
                                              const CrossOptions& opts = {});

/// Fills lambda_a and true_gap from the spectrum computed on mesh a.
void attach_true_spectrum(ProjectionReport& report, const EigenSet& eigs_a);

/// Ks with lambda_a_k > bound_k + 1e-6 lambda_a_k + budget_k (empty when infeasible or clean).
std::vector<int> bound_violations(const ProjectionReport& report);

}  // namespace specstab
