#include "specstab/fem/function.hpp"

#include <cmath>

#include "specstab/error.hpp"

namespace specstab {

FEFunction::FEFunction(std::shared_ptr<const TriMesh> mesh, Vector values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (!mesh_) throw ValidationError("FEFunction: null mesh");
  if (values_.size() != mesh_->n_vertices()) throw ValidationError("FEFunction: value count differs from vertex count");
}

FEFunction FEFunction::interpolate(std::shared_ptr<const TriMesh> mesh, const std::function<double(Point)>& f) {
  if (!mesh) throw ValidationError("FEFunction: null mesh");
  Vector v(mesh->n_vertices());
  for (int i = 0; i < mesh->n_vertices(); ++i) v[i] = f(mesh->vertices()[static_cast<size_t>(i)]);
  return FEFunction(std::move(mesh), std::move(v));
}

std::optional<double> FEFunction::eval(Point x) const {
  const auto loc = mesh_->locate(x);
  if (!loc) return std::nullopt;
  const auto& tri = mesh_->triangles()[static_cast<size_t>(loc->triangle)];
  return loc->bary[0] * values_[tri[0]] + loc->bary[1] * values_[tri[1]] + loc->bary[2] * values_[tri[2]];
}

Point FEFunction::gradient(int t) const {
  const auto g = basis_gradients(*mesh_, t);
  const auto& tri = mesh_->triangles()[static_cast<size_t>(t)];
  return g[0] * values_[tri[0]] + g[1] * values_[tri[1]] + g[2] * values_[tri[2]];
}

namespace {

/// Sum of weight(centroid) * area over the pieces of triangle (a,b,c) kept by the disk test.
template <class W>
double clipped_measure(Point a, Point b, Point c, Point x0, double r, int depth, bool weighted, W&& weight) {
  const double r2 = r * r;
  auto d2 = [&](Point p) { return dot(p - x0, p - x0); };
  const bool all_in = d2(a) <= r2 && d2(b) <= r2 && d2(c) <= r2;
  const double area = 0.5 * std::abs(orient(a, b, c));
  if (all_in && !weighted) return area;
  if (!all_in) {
    // Disjoint when the disk misses the triangle entirely.
    const bool inside = orient(a, b, x0) >= 0 && orient(b, c, x0) >= 0 && orient(c, a, x0) >= 0;
    const double dmin = std::min({segment_distance(x0, a, b), segment_distance(x0, b, c), segment_distance(x0, c, a)});
    if (!inside && dmin > r) return 0.0;
  }
  if (depth == 0) {
    const Point g = (a + b + c) / 3.0;
    return d2(g) <= r2 ? area * weight(g) : 0.0;
  }
  const Point ab = (a + b) * 0.5, bc = (b + c) * 0.5, ca = (c + a) * 0.5;
  return clipped_measure(a, ab, ca, x0, r, depth - 1, weighted, weight) +
         clipped_measure(ab, b, bc, x0, r, depth - 1, weighted, weight) +
         clipped_measure(ca, bc, c, x0, r, depth - 1, weighted, weight) +
         clipped_measure(ab, bc, ca, x0, r, depth - 1, weighted, weight);
}

template <class W>
double clipped_energy(const FEFunction& u, Point x0, double r, int n_subdiv, bool weighted, W&& weight) {
  if (!(r > 0.0)) throw ValidationError("region energy: radius must be positive");
  if (n_subdiv < 0) throw ValidationError("region energy: subdivision depth must be nonnegative");
  const TriMesh& m = u.mesh();
  const auto& v = m.vertices();
  double e = 0.0;
  for (int t = 0; t < m.n_triangles(); ++t) {
    const auto& tri = m.triangles()[static_cast<size_t>(t)];
    const Point g = u.gradient(t);
    const double g2 = dot(g, g);
    if (g2 == 0.0) continue;
    e += g2 * clipped_measure(v[tri[0]], v[tri[1]], v[tri[2]], x0, r, n_subdiv, weighted, weight);
  }
  return e;
}

}  // namespace

double region_energy(const FEFunction& u, Point center, double r, int n_subdiv) {
  return clipped_energy(u, center, r, n_subdiv, false, [](Point) { return 1.0; });
}

double weighted_region_energy(const FEFunction& u, Point center, double r, double exponent, int n_subdiv) {
  if (exponent == 0.0) return region_energy(u, center, r, n_subdiv);
  if (!(exponent < 2.0)) throw ValidationError("weighted region energy: |x|^-s is not integrable in 2D for s >= 2");
  return clipped_energy(u, center, r, n_subdiv, true,
                        [&](Point g) { return std::pow(distance(g, center), -exponent); });
}

double sup_norm(const FEFunction& u) { return u.values().cwiseAbs().maxCoeff(); }

double l2_norm(const FEFunction& u, const SparseSymOperator& M) {
  if (M.dimension() != u.values().size()) throw ValidationError("l2_norm: operator does not match the function");
  return std::sqrt(std::max(0.0, M.form(u.values(), u.values())));
}

}  // namespace specstab
