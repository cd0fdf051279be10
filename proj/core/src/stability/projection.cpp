#include "specstab/stability/projection.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "specstab/error.hpp"

namespace specstab {

double abstract_bound(double lambda_b, double A, double B) {
  if (!(A >= 0.0) || !(B >= 0.0)) throw ValidationError("abstract_bound: A and B must be nonnegative");
  if (!(B < 1.0)) throw InfeasibleError("abstract_bound: B >= 1, the bound is infeasible");
  const double s = 1.0 - std::sqrt(B);
  return lambda_b + A / (s * s);
}

struct Projector::Factor {
  Eigen::SimplicialLLT<SparseMatrix> llt;
};

Projector::Projector(BoundaryKind kind, std::shared_ptr<const TriMesh> mesh_a, std::shared_ptr<const TriMesh> mesh_b,
                     const CrossOptions& opts)
    : kind_(kind), mesh_a_(std::move(mesh_a)), mesh_b_(std::move(mesh_b)) {
  if (!mesh_a_ || !mesh_b_) throw ValidationError("Projector: null mesh");
  K_a_ = assemble_stiffness(*mesh_a_);
  M_a_ = assemble_mass(*mesh_a_);
  K_b_ = assemble_stiffness(*mesh_b_);
  M_b_ = assemble_mass(*mesh_b_);
  cross_ = cross_matrices(*mesh_a_, *mesh_b_, opts);
  auto f = std::make_shared<Factor>();
  if (kind_ == BoundaryKind::Dirichlet) {
    const auto sys = restrict_dirichlet(K_a_, M_a_, *mesh_a_);
    interior_ = sys.interior;
    full_to_reduced_ = sys.full_to_reduced;
    f->llt.compute(sys.K0.matrix());
  } else {
    const SparseMatrix A = K_a_.matrix() + M_a_.matrix();
    f->llt.compute(A);
  }
  if (f->llt.info() != Eigen::Success) throw NumericalError("Projector: factorization failed");
  factor_ = f;
}

Eigen::MatrixXd Projector::project(const Eigen::MatrixXd& U) const {
  if (U.rows() != mesh_b_->n_vertices()) throw ValidationError("Projector: vectors do not live on mesh b");
  if (kind_ == BoundaryKind::Neumann) {
    const Eigen::MatrixXd rhs = cross_.M * U + cross_.K * U;
    return factor_->llt.solve(rhs);
  }
  const auto& flags = mesh_b_->boundary_flags();
  for (Eigen::Index j = 0; j < U.cols(); ++j) {
    const double scale = std::max(U.col(j).cwiseAbs().maxCoeff(), 1e-300);
    for (int v = 0; v < mesh_b_->n_vertices(); ++v)
      if (flags[static_cast<size_t>(v)] && std::abs(U(v, j)) > 1e-12 * scale)
        throw ValidationError("dirichlet_project: function does not vanish on the boundary of mesh b");
  }
  const Eigen::MatrixXd full = cross_.K * U;
  Eigen::MatrixXd rhs(static_cast<Eigen::Index>(interior_.size()), U.cols());
  for (size_t i = 0; i < interior_.size(); ++i) rhs.row(static_cast<Eigen::Index>(i)) = full.row(interior_[i]);
  const Eigen::MatrixXd red = factor_->llt.solve(rhs);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(mesh_a_->n_vertices(), U.cols());
  for (size_t i = 0; i < interior_.size(); ++i) out.row(interior_[i]) = red.row(static_cast<Eigen::Index>(i));
  return out;
}

FEFunction Projector::project(const FEFunction& u_b) const {
  if (u_b.mesh_ptr() != mesh_b_ && &u_b.mesh() != mesh_b_.get())
    throw ValidationError("Projector: function is not defined on mesh b");
  const Eigen::MatrixXd p = project(Eigen::MatrixXd(u_b.values()));
  return FEFunction(mesh_a_, p.col(0));
}

void Projector::gram(const Eigen::MatrixXd& U, const Eigen::MatrixXd& P, Eigen::MatrixXd& G_H,
                     Eigen::MatrixXd& G_h) const {
  const Eigen::MatrixXd cm = P.transpose() * (cross_.M * U);
  const Eigen::MatrixXd ck = P.transpose() * (cross_.K * U);
  const Eigen::MatrixXd mm = P.transpose() * (M_a_.matrix() * P) - cm - cm.transpose() +
                             U.transpose() * (M_b_.matrix() * U);
  const Eigen::MatrixXd kk = P.transpose() * (K_a_.matrix() * P) - ck - ck.transpose() +
                             U.transpose() * (K_b_.matrix() * U);
  G_h = 0.5 * (mm + mm.transpose());
  G_H = kind_ == BoundaryKind::Dirichlet ? Eigen::MatrixXd(0.5 * (kk + kk.transpose()))
                                         : Eigen::MatrixXd(0.5 * (kk + kk.transpose()) + G_h);
}

FEFunction dirichlet_project(const FEFunction& u_b, std::shared_ptr<const TriMesh> mesh_a, const CrossOptions& opts) {
  const Projector p(BoundaryKind::Dirichlet, std::move(mesh_a), u_b.mesh_ptr(), opts);
  return p.project(u_b);
}

namespace {

double top_eigenvalue(const Eigen::MatrixXd& G) {
  if (G.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("projection_constants: Gram eigenproblem failed");
  return std::max(0.0, es.eigenvalues().maxCoeff());
}

Eigen::MatrixXd stack(const EigenSet& e) {
  Eigen::MatrixXd U(e.mesh->n_vertices(), static_cast<Eigen::Index>(e.eigenvectors.size()));
  for (size_t i = 0; i < e.eigenvectors.size(); ++i) U.col(static_cast<Eigen::Index>(i)) = e.eigenvectors[i].values();
  return U;
}

}  // namespace

ProjectionReport projection_constants(const EigenSet& eigs_b, const Projector& projector) {
  if (eigs_b.eigenvectors.empty()) throw ValidationError("projection_constants: empty eigenset");
  if (eigs_b.kind != projector.kind()) throw ValidationError("projection_constants: boundary kinds differ");
  const Eigen::MatrixXd U = stack(eigs_b);
  const Eigen::MatrixXd P = projector.project(U);
  ProjectionReport r;
  r.kind = eigs_b.kind;
  r.n = static_cast<int>(eigs_b.eigenvalues.size());
  projector.gram(U, P, r.gram_H, r.gram_h);
  r.A_hat = top_eigenvalue(r.gram_H);
  r.B_hat = top_eigenvalue(r.gram_h);
  r.feasible = r.B_hat < 1.0;
  r.lambda_b = eigs_b.eigenvalues;
  r.quadrature_budget.assign(static_cast<size_t>(r.n), 0.0);
  const double shift = r.kind == BoundaryKind::Neumann ? 1.0 : 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  for (double lb : r.lambda_b) {
    r.abstract_bound.push_back(r.feasible ? abstract_bound(lb, r.A_hat, r.B_hat) : inf);
    const double s = 1.0 - std::sqrt(r.B_hat);
    r.minmax_bound.push_back(r.feasible ? (lb + shift) / (s * s) - shift : inf);
  }
  return r;
}

ProjectionReport projection_constants(const EigenSet& eigs_b, std::shared_ptr<const TriMesh> mesh_a,
                                      const CrossOptions& opts) {
  const Projector p(eigs_b.kind, mesh_a, eigs_b.mesh, opts);
  ProjectionReport r = projection_constants(eigs_b, p);
  if (opts.method == CrossMethod::Sampled) {
    CrossOptions fine = opts;
    fine.depth = std::max(1, 2 * opts.depth);
    const ProjectionReport rf = projection_constants(eigs_b, Projector(eigs_b.kind, mesh_a, eigs_b.mesh, fine));
    for (int k = 0; k < r.n; ++k) {
      const auto i = static_cast<size_t>(k);
      if (r.feasible && rf.feasible) r.quadrature_budget[i] = std::abs(r.abstract_bound[i] - rf.abstract_bound[i]);
      else r.quadrature_budget[i] = std::numeric_limits<double>::infinity();
    }
  }
  return r;
}

ProjectionReport projection_constants_dirichlet(const EigenSet& eigs_b, std::shared_ptr<const TriMesh> mesh_a,
                                                const CrossOptions& opts) {
  if (eigs_b.kind != BoundaryKind::Dirichlet) throw ValidationError("projection_constants_dirichlet: Neumann set");
  return projection_constants(eigs_b, std::move(mesh_a), opts);
}

ProjectionReport projection_constants_neumann(const EigenSet& eigs_b, std::shared_ptr<const TriMesh> mesh_a,
                                              const CrossOptions& opts) {
  if (eigs_b.kind != BoundaryKind::Neumann) throw ValidationError("projection_constants_neumann: Dirichlet set");
  if (!mesh_a || !mesh_a->connected() || !eigs_b.mesh->connected())
    throw ValidationError("projection_constants_neumann: both domains must be connected");
  return projection_constants(eigs_b, std::move(mesh_a), opts);
}

void attach_true_spectrum(ProjectionReport& report, const EigenSet& eigs_a) {
  if (static_cast<int>(eigs_a.eigenvalues.size()) < report.n)
    throw ValidationError("attach_true_spectrum: too few eigenvalues on mesh a");
  report.lambda_a.assign(eigs_a.eigenvalues.begin(), eigs_a.eigenvalues.begin() + report.n);
  report.true_gap.clear();
  for (int k = 0; k < report.n; ++k)
    report.true_gap.push_back(report.lambda_a[static_cast<size_t>(k)] - report.lambda_b[static_cast<size_t>(k)]);
}

std::vector<int> bound_violations(const ProjectionReport& report) {
  std::vector<int> out;
  if (!report.feasible || report.lambda_a.empty()) return out;
  for (int k = 0; k < report.n; ++k) {
    const auto i = static_cast<size_t>(k);
    const double la = report.lambda_a[i];
    if (la > report.abstract_bound[i] + 1e-6 * std::abs(la) + report.quadrature_budget[i]) out.push_back(k + 1);
  }
  return out;
}

}  // namespace specstab
