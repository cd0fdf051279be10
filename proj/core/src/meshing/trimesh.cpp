#include "specstab/meshing/trimesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "specstab/error.hpp"

namespace specstab {

/// Uniform bins over the mesh bounding box; each bin lists, in increasing order, the
/// triangles whose bounding box overlaps it.
class LocateGrid {
 public:
  LocateGrid(const std::vector<Point>& v, const std::vector<Triangle>& tris, const BoundingBox& box) : box_(box) {
    double mean_diam = 0.0;
    for (const auto& t : tris)
      mean_diam += std::max({distance(v[t[0]], v[t[1]]), distance(v[t[1]], v[t[2]]), distance(v[t[2]], v[t[0]])});
    mean_diam /= std::max<size_t>(tris.size(), 1);
    const double cell = std::max(mean_diam, 1e-300);
    nx_ = std::clamp(static_cast<int>(box.width() / cell) + 1, 1, 4096);
    ny_ = std::clamp(static_cast<int>(box.height() / cell) + 1, 1, 4096);
    cw_ = std::max(box.width(), 1e-300) / nx_;
    ch_ = std::max(box.height(), 1e-300) / ny_;
    pad_ = 1e-12 * std::max(box.diagonal(), 1e-300);

    std::vector<int> count(static_cast<size_t>(nx_) * ny_ + 1, 0);
    auto for_cells = [&](const Triangle& t, auto&& f) {
      const double x0 = std::min({v[t[0]].x, v[t[1]].x, v[t[2]].x}) - pad_;
      const double x1 = std::max({v[t[0]].x, v[t[1]].x, v[t[2]].x}) + pad_;
      const double y0 = std::min({v[t[0]].y, v[t[1]].y, v[t[2]].y}) - pad_;
      const double y1 = std::max({v[t[0]].y, v[t[1]].y, v[t[2]].y}) + pad_;
      for (int j = cy(y0); j <= cy(y1); ++j)
        for (int i = cx(x0); i <= cx(x1); ++i) f(static_cast<size_t>(j) * nx_ + i);
    };
    for (const auto& t : tris) for_cells(t, [&](size_t c) { ++count[c + 1]; });
    std::partial_sum(count.begin(), count.end(), count.begin());
    start_ = count;
    items_.resize(static_cast<size_t>(start_.back()));
    for (int id = 0; id < static_cast<int>(tris.size()); ++id)
      for_cells(tris[id], [&](size_t c) { items_[static_cast<size_t>(count[c]++)] = id; });
  }

  template <class F>
  bool visit(Point p, F&& f) const {
    if (p.x < box_.lo.x - pad_ || p.x > box_.hi.x + pad_ || p.y < box_.lo.y - pad_ || p.y > box_.hi.y + pad_)
      return false;
    const size_t c = static_cast<size_t>(cy(p.y)) * nx_ + cx(p.x);
    for (int k = start_[c]; k < start_[c + 1]; ++k)
      if (f(items_[static_cast<size_t>(k)])) return true;
    return false;
  }

 private:
  int cx(double x) const { return std::clamp(static_cast<int>((x - box_.lo.x) / cw_), 0, nx_ - 1); }
  int cy(double y) const { return std::clamp(static_cast<int>((y - box_.lo.y) / ch_), 0, ny_ - 1); }

  BoundingBox box_;
  int nx_ = 1, ny_ = 1;
  double cw_ = 1.0, ch_ = 1.0, pad_ = 0.0;
  std::vector<int> start_;
  std::vector<int> items_;
};

TriMesh::TriMesh(std::vector<Point> vertices, std::vector<Triangle> triangles, std::vector<bool> boundary,
                 double h_target, std::string domain_ref)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_(std::move(boundary)),
      h_target_(h_target),
      domain_ref_(std::move(domain_ref)) {
  if (vertices_.empty() || triangles_.empty()) throw ValidationError("mesh: no vertices or triangles");
  if (boundary_.size() != vertices_.size()) throw ValidationError("mesh: boundary flag count differs from vertex count");
  bbox_.lo = bbox_.hi = vertices_.front();
  for (Point p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError("mesh: non-finite vertex");
    bbox_.lo = {std::min(bbox_.lo.x, p.x), std::min(bbox_.lo.y, p.y)};
    bbox_.hi = {std::max(bbox_.hi.x, p.x), std::max(bbox_.hi.y, p.y)};
  }
  const int nv = n_vertices();
  for (int t = 0; t < n_triangles(); ++t) {
    for (int k : triangles_[t])
      if (k < 0 || k >= nv) throw ValidationError("mesh: triangle " + std::to_string(t) + " has an invalid index");
    if (!(triangle_area(t) > 0.0))
      throw ValidationError("mesh: triangle " + std::to_string(t) + " is degenerate or clockwise");
  }
  grid_ = std::make_shared<LocateGrid>(vertices_, triangles_, bbox_);
}

int TriMesh::n_interior() const {
  return static_cast<int>(std::count(boundary_.begin(), boundary_.end(), false));
}

double TriMesh::triangle_area(int t) const {
  const auto& tri = triangles_[static_cast<size_t>(t)];
  return 0.5 * orient(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double TriMesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < n_triangles(); ++t) a += triangle_area(t);
  return a;
}

Point TriMesh::centroid(int t) const {
  const auto& tri = triangles_[static_cast<size_t>(t)];
  return (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
}

std::vector<std::array<int, 2>> TriMesh::edges() const {
  std::vector<std::array<int, 2>> out;
  out.reserve(triangles_.size() * 3);
  for (const auto& t : triangles_)
    for (int k = 0; k < 3; ++k) out.push_back({std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3])});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double TriMesh::max_edge() const {
  double m = 0.0;
  for (const auto& e : edges()) m = std::max(m, distance(vertices_[e[0]], vertices_[e[1]]));
  return m;
}

double TriMesh::min_angle() const {
  double m = std::numbers::pi;
  for (const auto& t : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const Point a = vertices_[t[k]], b = vertices_[t[(k + 1) % 3]], c = vertices_[t[(k + 2) % 3]];
      const double ang = std::atan2(std::abs(cross(b - a, c - a)), dot(b - a, c - a));
      m = std::min(m, ang);
    }
  }
  return m;
}

bool TriMesh::connected() const {
  std::vector<int> parent(vertices_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> used(vertices_.size(), false);
  for (const auto& t : triangles_) {
    for (int k : t) used[k] = true;
    parent[find(t[1])] = find(t[0]);
    parent[find(t[2])] = find(t[0]);
  }
  int root = -1;
  for (int v = 0; v < n_vertices(); ++v) {
    if (!used[v]) continue;
    if (root < 0) root = find(v);
    else if (find(v) != root) return false;
  }
  return true;
}

std::optional<Location> TriMesh::locate(Point x) const {
  constexpr double tol = 1e-12;
  Location loc;
  const bool hit = grid_->visit(x, [&](int t) {
    const auto& tri = triangles_[static_cast<size_t>(t)];
    const Point a = vertices_[tri[0]], b = vertices_[tri[1]], c = vertices_[tri[2]];
    const double area2 = orient(a, b, c);
    const double l1 = orient(a, x, c) / area2;
    const double l2 = orient(a, b, x) / area2;
    const double l0 = 1.0 - l1 - l2;
    if (l0 < -tol || l1 < -tol || l2 < -tol || l0 > 1 + tol || l1 > 1 + tol || l2 > 1 + tol) return false;
    loc.triangle = t;
    loc.bary = {l0, l1, l2};
    return true;
  });
  if (!hit) return std::nullopt;
  return loc;
}

TriMesh TriMesh::scaled(double t) const {
  if (!(t > 0.0)) throw ValidationError("mesh scale factor must be positive");
  std::vector<Point> v = vertices_;
  for (auto& p : v) p = p * t;
  return TriMesh(std::move(v), triangles_, boundary_, h_target_ * t, domain_ref_);
}

}  // namespace specstab
