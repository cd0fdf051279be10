#include "specstab/fem/operators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "specstab/error.hpp"

namespace specstab {

SparseSymOperator::SparseSymOperator(SparseMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("operator must be square");
  m_.makeCompressed();
  if (m_.nonZeros() == 0) return;
  const SparseMatrix diff = SparseMatrix(m_.transpose()) - m_;
  const double scale = Eigen::Map<const Vector>(m_.valuePtr(), m_.nonZeros()).cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.nonZeros(); ++k) worst = std::max(worst, std::abs(diff.valuePtr()[k]));
  if (worst > 1e-14 * scale) throw ValidationError("operator is not symmetric");
}

std::vector<std::tuple<int, int, double>> SparseSymOperator::triplets() const {
  std::vector<std::tuple<int, int, double>> out;
  out.reserve(static_cast<size_t>(m_.nonZeros()));
  for (int k = 0; k < m_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m_, k); it; ++it)
      out.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  return out;
}

void SparseSymOperator::write_triplets(std::ostream& os) const {
  const auto old = os.precision(17);
  for (const auto& [i, j, v] : triplets()) os << i << ' ' << j << ' ' << v << '\n';
  os.precision(old);
}

double SparseSymOperator::entry_sum() const { return m_.sum(); }

std::array<Point, 3> basis_gradients(const TriMesh& m, int t) {
  const auto& tri = m.triangles()[static_cast<size_t>(t)];
  const auto& v = m.vertices();
  const Point a = v[tri[0]], b = v[tri[1]], c = v[tri[2]];
  const double area2 = orient(a, b, c);
  return {Point{b.y - c.y, c.x - b.x} / area2, Point{c.y - a.y, a.x - c.x} / area2,
          Point{a.y - b.y, b.x - a.x} / area2};
}

namespace {

template <class Local>
SparseSymOperator assemble(const TriMesh& m, Local&& local) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(m.n_triangles()) * 9);
  for (int t = 0; t < m.n_triangles(); ++t) {
    const auto& tri = m.triangles()[static_cast<size_t>(t)];
    double k[3][3];
    local(t, k);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) trip.emplace_back(tri[i], tri[j], k[i][j]);
  }
  SparseMatrix a(m.n_vertices(), m.n_vertices());
  a.setFromTriplets(trip.begin(), trip.end());
  return SparseSymOperator(std::move(a));
}

}  // namespace

SparseSymOperator assemble_stiffness(const TriMesh& m) {
  return assemble(m, [&](int t, double k[3][3]) {
    const auto g = basis_gradients(m, t);
    const double area = m.triangle_area(t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) k[i][j] = area * dot(g[i], g[j]);
  });
}

SparseSymOperator assemble_mass(const TriMesh& m) {
  return assemble(m, [&](int t, double k[3][3]) {
    const double a12 = m.triangle_area(t) / 12.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) k[i][j] = a12 * (i == j ? 2.0 : 1.0);
  });
}

Vector DirichletSystem::extend(const Vector& reduced) const {
  if (reduced.size() != static_cast<Eigen::Index>(interior.size()))
    throw ValidationError("extend: reduced vector has the wrong length");
  Vector full = Vector::Zero(static_cast<Eigen::Index>(full_to_reduced.size()));
  for (size_t i = 0; i < interior.size(); ++i) full[interior[i]] = reduced[static_cast<Eigen::Index>(i)];
  return full;
}

Vector DirichletSystem::restrict(const Vector& full) const {
  if (full.size() != static_cast<Eigen::Index>(full_to_reduced.size()))
    throw ValidationError("restrict: full vector has the wrong length");
  Vector r(static_cast<Eigen::Index>(interior.size()));
  for (size_t i = 0; i < interior.size(); ++i) r[static_cast<Eigen::Index>(i)] = full[interior[i]];
  return r;
}

DirichletSystem restrict_dirichlet(const SparseSymOperator& K, const SparseSymOperator& M, const TriMesh& m) {
  if (K.dimension() != m.n_vertices() || M.dimension() != m.n_vertices())
    throw ValidationError("restrict_dirichlet: operators do not match the mesh");
  DirichletSystem sys;
  sys.full_to_reduced.assign(static_cast<size_t>(m.n_vertices()), -1);
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (m.boundary_flags()[static_cast<size_t>(v)]) continue;
    sys.full_to_reduced[static_cast<size_t>(v)] = static_cast<int>(sys.interior.size());
    sys.interior.push_back(v);
  }
  if (sys.interior.empty()) throw ValidationError("mesh too coarse");
  auto reduce = [&](const SparseMatrix& a) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < a.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
        const int i = sys.full_to_reduced[static_cast<size_t>(it.row())];
        const int j = sys.full_to_reduced[static_cast<size_t>(it.col())];
        if (i >= 0 && j >= 0) trip.emplace_back(i, j, it.value());
      }
    const auto n = static_cast<Eigen::Index>(sys.interior.size());
    SparseMatrix r(n, n);
    r.setFromTriplets(trip.begin(), trip.end());
    return SparseSymOperator(std::move(r));
  };
  sys.K0 = reduce(K.matrix());
  sys.M0 = reduce(M.matrix());
  return sys;
}

}  // namespace specstab
