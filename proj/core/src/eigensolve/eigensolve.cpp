#include "specstab/eigensolve/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "specstab/error.hpp"

namespace specstab {

const char* to_string(BoundaryKind k) { return k == BoundaryKind::Dirichlet ? "dirichlet" : "neumann"; }

namespace {

using Matrix = Eigen::MatrixXd;

/// Keeps the leading columns of V B-orthonormal as new vectors are appended.
class Basis {
 public:
  Basis(const SparseMatrix& B, Eigen::Index n, Eigen::Index cap) : B_(B), V_(n, cap) {}

  Eigen::Index size() const { return m_; }
  Eigen::Index capacity() const { return V_.cols(); }
  auto active() const { return V_.leftCols(m_); }
  auto column(Eigen::Index j) const { return V_.col(j); }

  /// Orthogonalizes x against the basis (two passes) and appends it if it keeps at least
  /// `keep` of its B-norm. Returns false when x is numerically dependent.
  bool append(Vector x, double keep = 1e-8) {
    if (m_ == capacity()) grow();
    const double before = std::sqrt(std::max(0.0, x.dot(B_ * x)));
    if (!(before > 0.0)) return false;
    for (int pass = 0; pass < 2; ++pass) {
      if (m_ == 0) break;
      const Vector bx = B_ * x;
      x.noalias() -= V_.leftCols(m_) * (V_.leftCols(m_).transpose() * bx);
    }
    const double after = std::sqrt(std::max(0.0, x.dot(B_ * x)));
    if (!(after > keep * before)) return false;
    V_.col(m_++) = x / after;
    return true;
  }

 private:
  void grow() { V_.conservativeResize(Eigen::NoChange, std::max<Eigen::Index>(1, 2 * V_.cols())); }

  const SparseMatrix& B_;
  Matrix V_;
  Eigen::Index m_ = 0;
};

}  // namespace

GeneralizedEigenResult smallest_eigenpairs(const SparseMatrix& A, const SparseMatrix& B, int n,
                                           const EigenOptions& opts) {
  const Eigen::Index N = A.rows();
  if (A.cols() != N || B.rows() != N || B.cols() != N) throw ValidationError("eigensolve: operator sizes differ");
  if (n < 1 || n > N) throw ValidationError("eigensolve: need 1 <= n <= dimension");
  if (!(opts.tol > 0.0) || opts.block < 1) throw ValidationError("eigensolve: tol and block must be positive");

  Eigen::SimplicialLLT<SparseMatrix> chol(A);
  if (chol.info() != Eigen::Success) throw NumericalError("eigensolve: sparse Cholesky factorization failed");

  const Eigen::Index p = std::min<Eigen::Index>(opts.block, N);
  const int max_steps = opts.max_iterations > 0 ? opts.max_iterations : 50 * n;
  Basis basis(B, N, std::min<Eigen::Index>(N, p * 8 + n));
  Matrix T = Matrix::Zero(0, 0);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto random_vector = [&] {
    Vector x(N);
    for (Eigen::Index i = 0; i < N; ++i) x[i] = unif(rng);
    return x;
  };

  // Start block: the constant vector followed by seeded random vectors.
  std::vector<Eigen::Index> block;
  for (Eigen::Index j = 0; j < p; ++j) {
    Vector x = j == 0 ? Vector::Ones(N) : random_vector();
    for (int tries = 0; !basis.append(x) && tries < 8; ++tries) x = random_vector();
    block.push_back(basis.size() - 1);
  }

  GeneralizedEigenResult out;
  std::vector<double> last_res;
  for (int step = 1; step <= max_steps; ++step) {
    // W = A^-1 B V_k and the new columns of T = V^T B A^-1 B V.
    Matrix W(N, static_cast<Eigen::Index>(block.size()));
    for (size_t j = 0; j < block.size(); ++j) W.col(static_cast<Eigen::Index>(j)) = chol.solve(B * basis.column(block[j]));
    const Eigen::Index m = basis.size();
    const Matrix BW = B * W;
    const Matrix cols = basis.active().transpose() * BW;
    Matrix Tn = Matrix::Zero(m, m);
    Tn.topLeftCorner(T.rows(), T.cols()) = T;
    for (size_t j = 0; j < block.size(); ++j) {
      const Eigen::Index c = block[j];
      Tn.col(c) = cols.col(static_cast<Eigen::Index>(j));
      Tn.row(c) = cols.col(static_cast<Eigen::Index>(j)).transpose();
    }
    T = 0.5 * (Tn + Tn.transpose());

    const bool full = m == N;
    if (m >= n) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(T);
      if (es.info() != Eigen::Success) throw NumericalError("eigensolve: dense projected eigenproblem failed");
      // Largest theta = 1/nu first.
      Matrix X = basis.active() * es.eigenvectors().rightCols(n).rowwise().reverse();
      Vector vals(n);
      std::vector<double> res(static_cast<size_t>(n));
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        auto x = X.col(i);
        const Vector bx = B * x;
        const double bn = std::sqrt(x.dot(bx));
        x /= bn;
        const Vector ax = A * x;
        const double nu = x.dot(ax);
        vals[i] = nu;
        res[static_cast<size_t>(i)] = (ax - nu * (bx / bn)).norm() / ((1.0 + std::abs(nu)) * (bx / bn).norm());
        if (!(res[static_cast<size_t>(i)] <= opts.tol)) ok = false;
      }
      last_res = res;
      if (ok || full) {
        std::vector<int> order(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        out.values.resize(n);
        out.vectors.resize(N, n);
        for (int i = 0; i < n; ++i) {
          const int k = order[static_cast<size_t>(i)];
          out.values[i] = vals[k];
          Vector x = X.col(k);
          Eigen::Index arg = 0;
          x.cwiseAbs().maxCoeff(&arg);
          if (x[arg] < 0) x = -x;
          out.vectors.col(i) = x;
          out.residuals.push_back(res[static_cast<size_t>(k)]);
        }
        out.iterations = step;
        if (!ok) {
          const double worst = *std::max_element(res.begin(), res.end());
          if (worst > 1e3 * opts.tol) throw NumericalError("eigensolve: full subspace reached without convergence");
        }
        return out;
      }
    }

    // Next block from W, orthogonalized against everything so far.
    block.clear();
    for (Eigen::Index j = 0; j < W.cols() && basis.size() < N; ++j) {
      bool added = basis.append(W.col(j));
      for (int tries = 0; !added && tries < 8 && basis.size() < N; ++tries) added = basis.append(random_vector());
      if (added) block.push_back(basis.size() - 1);
    }
    if (block.empty()) break;
  }

  std::ostringstream os;
  os << "eigensolve: no convergence within " << max_steps << " block steps; residuals";
  for (double r : last_res) os << ' ' << r;
  throw NumericalError(os.str());
}

double rayleigh_quotient(const Vector& u, const SparseSymOperator& K, const SparseSymOperator& M) {
  if (u.size() != K.dimension() || u.size() != M.dimension())
    throw ValidationError("rayleigh_quotient: dimension mismatch");
  const double m = M.form(u, u);
  if (!(m > 0.0)) throw ValidationError("rayleigh_quotient: zero M-norm");
  return K.form(u, u) / m;
}

double rayleigh_quotient(const FEFunction& u, const SparseSymOperator& K, const SparseSymOperator& M) {
  return rayleigh_quotient(u.values(), K, M);
}

EigenSet solve_dirichlet(std::shared_ptr<const TriMesh> mesh, int n, const EigenOptions& opts) {
  if (!mesh) throw ValidationError("solve_dirichlet: null mesh");
  if (!mesh->connected()) throw ValidationError("solve_dirichlet: mesh is not connected");
  const auto K = assemble_stiffness(*mesh);
  const auto M = assemble_mass(*mesh);
  const auto sys = restrict_dirichlet(K, M, *mesh);
  if (n > sys.K0.dimension()) throw ValidationError("solve_dirichlet: fewer interior vertices than requested pairs");
  const auto r = smallest_eigenpairs(sys.K0.matrix(), sys.M0.matrix(), n, opts);
  EigenSet out;
  out.kind = BoundaryKind::Dirichlet;
  out.mesh = mesh;
  out.iterations = r.iterations;
  out.residuals = r.residuals;
  for (int i = 0; i < n; ++i) {
    out.eigenvalues.push_back(r.values[i]);
    out.eigenvectors.emplace_back(mesh, sys.extend(r.vectors.col(i)));
  }
  return out;
}

EigenSet solve_neumann(std::shared_ptr<const TriMesh> mesh, int n, const EigenOptions& opts) {
  if (!mesh) throw ValidationError("solve_neumann: null mesh");
  if (!mesh->connected()) throw ValidationError("solve_neumann: mesh is not connected");
  if (n > mesh->n_vertices()) throw ValidationError("solve_neumann: fewer vertices than requested pairs");
  const auto K = assemble_stiffness(*mesh);
  const auto M = assemble_mass(*mesh);
  const SparseMatrix A = K.matrix() + M.matrix();
  const auto r = smallest_eigenpairs(A, M.matrix(), n, opts);
  EigenSet out;
  out.kind = BoundaryKind::Neumann;
  out.mesh = mesh;
  out.iterations = r.iterations;
  for (int i = 0; i < n; ++i) {
    const Vector x = r.vectors.col(i);
    const Vector kx = K.matrix() * x, mx = M.matrix() * x;
    const double mu = std::max(0.0, x.dot(kx));
    out.eigenvalues.push_back(mu);
    out.residuals.push_back((kx - mu * mx).norm() / ((1.0 + mu) * mx.norm()));
    out.eigenvectors.emplace_back(mesh, x);
  }
  return out;
}

}  // namespace specstab
