#include "specstab/stability/cross_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "specstab/error.hpp"

namespace specstab {

namespace {

/// Bins over the bounding boxes of the triangles of one mesh.
class TriangleBins {
 public:
  explicit TriangleBins(const TriMesh& m) : m_(m), box_(m.bbox()) {
    double mean = 0.0;
    for (int t = 0; t < m.n_triangles(); ++t) mean += std::sqrt(2.0 * m.triangle_area(t));
    mean /= m.n_triangles();
    nx_ = std::clamp(static_cast<int>(box_.width() / mean) + 1, 1, 2048);
    ny_ = std::clamp(static_cast<int>(box_.height() / mean) + 1, 1, 2048);
    cells_.resize(static_cast<size_t>(nx_) * ny_);
    for (int t = 0; t < m.n_triangles(); ++t) {
      const BoundingBox b = tri_box(t);
      for (int j = cy(b.lo.y); j <= cy(b.hi.y); ++j)
        for (int i = cx(b.lo.x); i <= cx(b.hi.x); ++i) cells_[static_cast<size_t>(j) * nx_ + i].push_back(t);
    }
    stamp_.assign(static_cast<size_t>(m.n_triangles()), -1);
  }

  BoundingBox tri_box(int t) const {
    const auto& tri = m_.triangles()[static_cast<size_t>(t)];
    const auto& v = m_.vertices();
    BoundingBox b{v[tri[0]], v[tri[0]]};
    for (int k = 1; k < 3; ++k) {
      b.lo = {std::min(b.lo.x, v[tri[k]].x), std::min(b.lo.y, v[tri[k]].y)};
      b.hi = {std::max(b.hi.x, v[tri[k]].x), std::max(b.hi.y, v[tri[k]].y)};
    }
    return b;
  }

  /// Triangles whose bounding box overlaps `q`; `query_id` must differ between calls.
  void overlapping(const BoundingBox& q, int query_id, std::vector<int>& out) {
    out.clear();
    if (q.hi.x < box_.lo.x || q.lo.x > box_.hi.x || q.hi.y < box_.lo.y || q.lo.y > box_.hi.y) return;
    for (int j = cy(q.lo.y); j <= cy(q.hi.y); ++j)
      for (int i = cx(q.lo.x); i <= cx(q.hi.x); ++i)
        for (int t : cells_[static_cast<size_t>(j) * nx_ + i]) {
          if (stamp_[static_cast<size_t>(t)] == query_id) continue;
          stamp_[static_cast<size_t>(t)] = query_id;
          const BoundingBox b = tri_box(t);
          if (b.hi.x < q.lo.x || b.lo.x > q.hi.x || b.hi.y < q.lo.y || b.lo.y > q.hi.y) continue;
          out.push_back(t);
        }
  }

 private:
  int cx(double x) const {
    return std::clamp(static_cast<int>((x - box_.lo.x) / std::max(box_.width(), 1e-300) * nx_), 0, nx_ - 1);
  }
  int cy(double y) const {
    return std::clamp(static_cast<int>((y - box_.lo.y) / std::max(box_.height(), 1e-300) * ny_), 0, ny_ - 1);
  }

  const TriMesh& m_;
  BoundingBox box_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> cells_;
  std::vector<int> stamp_;
};

/// Convex polygon clipped by the left half-plane of each edge of a counterclockwise triangle.
std::vector<Point> clip(std::vector<Point> poly, const std::array<Point, 3>& tri) {
  std::vector<Point> next;
  for (int e = 0; e < 3 && !poly.empty(); ++e) {
    const Point a = tri[e], b = tri[(e + 1) % 3];
    next.clear();
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
      const Point p = poly[i], q = poly[(i + 1) % n];
      const double sp = orient(a, b, p), sq = orient(a, b, q);
      if (sp >= 0) next.push_back(p);
      if ((sp >= 0) != (sq >= 0)) next.push_back(p + (q - p) * (sp / (sp - sq)));
    }
    poly.swap(next);
  }
  return poly;
}

struct Element {
  std::array<Point, 3> v;
  std::array<Point, 3> grad;
  Point centroid;
  std::array<int, 3> ids;
};

Element element(const TriMesh& m, int t) {
  Element e;
  e.ids = m.triangles()[static_cast<size_t>(t)];
  for (int k = 0; k < 3; ++k) e.v[k] = m.vertices()[e.ids[k]];
  e.grad = basis_gradients(m, t);
  e.centroid = (e.v[0] + e.v[1] + e.v[2]) / 3.0;
  return e;
}

std::array<double, 3> bary(const Element& e, Point x) {
  return {1.0 / 3.0 + dot(e.grad[0], x - e.centroid), 1.0 / 3.0 + dot(e.grad[1], x - e.centroid),
          1.0 / 3.0 + dot(e.grad[2], x - e.centroid)};
}

void add_local(std::vector<Eigen::Triplet<double>>& tk, std::vector<Eigen::Triplet<double>>& tm, const Element& ea,
               const Element& eb, double area, const double mass[3][3]) {
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      tk.emplace_back(ea.ids[p], eb.ids[q], area * dot(ea.grad[p], eb.grad[q]));
      tm.emplace_back(ea.ids[p], eb.ids[q], mass[p][q]);
    }
}

CrossMatrices overlay(const TriMesh& a, const TriMesh& b) {
  TriangleBins bins(b);
  std::vector<Eigen::Triplet<double>> tk, tm;
  std::vector<int> cand;
  const double area_floor = 1e-15 * std::max(a.total_area(), b.total_area());
  for (int ta = 0; ta < a.n_triangles(); ++ta) {
    const Element ea = element(a, ta);
    BoundingBox qa{ea.v[0], ea.v[0]};
    for (Point p : ea.v) {
      qa.lo = {std::min(qa.lo.x, p.x), std::min(qa.lo.y, p.y)};
      qa.hi = {std::max(qa.hi.x, p.x), std::max(qa.hi.y, p.y)};
    }
    bins.overlapping(qa, ta, cand);
    for (int tb : cand) {
      const Element eb = element(b, tb);
      const auto poly = clip({ea.v[0], ea.v[1], ea.v[2]}, eb.v);
      if (poly.size() < 3) continue;
      double area = 0.0;
      double mass[3][3] = {};
      for (size_t i = 1; i + 1 < poly.size(); ++i) {
        const Point p0 = poly[0], p1 = poly[i], p2 = poly[i + 1];
        const double sub = 0.5 * orient(p0, p1, p2);
        if (sub <= 0.0) continue;
        area += sub;
        for (Point m : {(p0 + p1) * 0.5, (p1 + p2) * 0.5, (p2 + p0) * 0.5}) {
          const auto la = bary(ea, m), lb = bary(eb, m);
          for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) mass[p][q] += sub / 3.0 * la[p] * lb[q];
        }
      }
      if (area <= area_floor) continue;
      add_local(tk, tm, ea, eb, area, mass);
    }
  }
  CrossMatrices out{SparseMatrix(a.n_vertices(), b.n_vertices()), SparseMatrix(a.n_vertices(), b.n_vertices())};
  out.K.setFromTriplets(tk.begin(), tk.end());
  out.M.setFromTriplets(tm.begin(), tm.end());
  return out;
}

struct QuadPoint {
  double l0, l1, l2, w;
};

constexpr double kA1 = 0.059715871789770, kB1 = 0.470142064105115, kW1 = 0.132394152788506;
constexpr double kA2 = 0.797426985353087, kB2 = 0.101286507323456, kW2 = 0.125939180544827;
constexpr QuadPoint kSeven[7] = {{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225}, {kA1, kB1, kB1, kW1}, {kB1, kA1, kB1, kW1},
                                 {kB1, kB1, kA1, kW1},              {kA2, kB2, kB2, kW2}, {kB2, kA2, kB2, kW2},
                                 {kB2, kB2, kA2, kW2}};

CrossMatrices sampled(const TriMesh& a, const TriMesh& b, int depth) {
  struct Block {
    double k[3][3] = {};
    double m[3][3] = {};
  };
  std::vector<Eigen::Triplet<double>> tk, tm;
  std::vector<Element> eb_cache(static_cast<size_t>(b.n_triangles()));
  std::vector<char> have(static_cast<size_t>(b.n_triangles()), 0);
  std::map<int, Block> blocks;
  for (int ta = 0; ta < a.n_triangles(); ++ta) {
    const Element ea = element(a, ta);
    std::vector<std::array<Point, 3>> subs{ea.v}, next;
    for (int d = 0; d < depth; ++d) {
      next.clear();
      for (const auto& s : subs) {
        const Point ab = (s[0] + s[1]) * 0.5, bc = (s[1] + s[2]) * 0.5, ca = (s[2] + s[0]) * 0.5;
        next.push_back({s[0], ab, ca});
        next.push_back({ab, s[1], bc});
        next.push_back({ca, bc, s[2]});
        next.push_back({ab, bc, ca});
      }
      subs.swap(next);
    }
    blocks.clear();
    for (const auto& s : subs) {
      const double area = 0.5 * orient(s[0], s[1], s[2]);
      for (const auto& qp : kSeven) {
        const Point x = s[0] * qp.l0 + s[1] * qp.l1 + s[2] * qp.l2;
        const auto loc = b.locate(x);
        if (!loc) continue;
        const auto tb = static_cast<size_t>(loc->triangle);
        if (!have[tb]) {
          eb_cache[tb] = element(b, loc->triangle);
          have[tb] = 1;
        }
        const Element& eb = eb_cache[tb];
        const auto la = bary(ea, x);
        const double w = area * qp.w;
        Block& blk = blocks[loc->triangle];
        for (int p = 0; p < 3; ++p)
          for (int q = 0; q < 3; ++q) {
            blk.k[p][q] += w * dot(ea.grad[p], eb.grad[q]);
            blk.m[p][q] += w * la[p] * loc->bary[q];
          }
      }
    }
    for (const auto& [tb, blk] : blocks) {
      const Element& eb = eb_cache[static_cast<size_t>(tb)];
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
          tk.emplace_back(ea.ids[p], eb.ids[q], blk.k[p][q]);
          tm.emplace_back(ea.ids[p], eb.ids[q], blk.m[p][q]);
        }
    }
  }
  CrossMatrices out{SparseMatrix(a.n_vertices(), b.n_vertices()), SparseMatrix(a.n_vertices(), b.n_vertices())};
  out.K.setFromTriplets(tk.begin(), tk.end());
  out.M.setFromTriplets(tm.begin(), tm.end());
  return out;
}

}  // namespace

CrossMatrices cross_matrices(const TriMesh& a, const TriMesh& b, const CrossOptions& opts) {
  if (opts.method == CrossMethod::Overlay) return overlay(a, b);
  if (opts.depth < 0 || opts.depth > 8) throw ValidationError("cross_matrices: sampled depth must lie in [0, 8]");
  return sampled(a, b, opts.depth);
}

}  // namespace specstab
