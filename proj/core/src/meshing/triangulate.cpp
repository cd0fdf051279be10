#include "specstab/meshing/triangulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_set>

#include "specstab/error.hpp"

namespace specstab {

namespace {

double orient_robust(Point a, Point b, Point c) {
  const double l = (b.x - a.x) * (c.y - a.y);
  const double r = (b.y - a.y) * (c.x - a.x);
  const double det = l - r;
  if (std::abs(det) > 1e-14 * (std::abs(l) + std::abs(r))) return det;
  const long double lx = static_cast<long double>(b.x) - a.x, ly = static_cast<long double>(b.y) - a.y;
  const long double mx = static_cast<long double>(c.x) - a.x, my = static_cast<long double>(c.y) - a.y;
  return static_cast<double>(lx * my - ly * mx);
}

/// Positive when d lies inside the circumcircle of the counterclockwise triangle abc.
double incircle(Point a, Point b, Point c, Point d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
  const double det = al * (bdx * cdy - cdx * bdy) + bl * (cdx * ady - adx * cdy) + cl * (adx * bdy - bdx * ady);
  const double perm = al * (std::abs(bdx * cdy) + std::abs(cdx * bdy)) + bl * (std::abs(cdx * ady) + std::abs(adx * cdy)) +
                      cl * (std::abs(adx * bdy) + std::abs(bdx * ady));
  if (std::abs(det) > 1e-12 * perm) return det;
  using L = long double;
  const L ax = L(a.x) - d.x, ay = L(a.y) - d.y, bx = L(b.x) - d.x, by = L(b.y) - d.y;
  const L cx = L(c.x) - d.x, cy = L(c.y) - d.y;
  const L det2 = (ax * ax + ay * ay) * (bx * cy - cx * by) + (bx * bx + by * by) * (cx * ay - ax * cy) +
                 (cx * cx + cy * cy) * (ax * by - bx * ay);
  return static_cast<double>(det2);
}

Point circumcenter(Point a, Point b, Point c) {
  const Point ab = b - a, ac = c - a;
  const double d = 2.0 * cross(ab, ac);
  const double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
  return a + Point{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
}

bool in_diametral_disk(Point p, Point a, Point b) { return dot(p - a, p - b) <= 0.0; }

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

struct Tri {
  std::array<int, 3> v{};
  std::array<int, 3> nb{-1, -1, -1};  ///< nb[i] is across the edge opposite v[i]
  bool alive = true;
};

struct BoundaryEdge {
  int a, b, outside;
};

struct Cavity {
  std::vector<int> tris;
  std::vector<BoundaryEdge> boundary;
};

class Refiner {
 public:
  Refiner(const PolygonalDomain& d, double h, const MeshOptions& o) : dom_(d), h_(h), opts_(o) {
    const BoundingBox& box = d.bbox();
    const Point c = (box.lo + box.hi) * 0.5;
    const double s = std::max(box.diagonal(), 1e-300);
    add_vertex(c + Point{-20 * s, -10 * s}, false);
    add_vertex(c + Point{20 * s, -10 * s}, false);
    add_vertex(c + Point{0, 20 * s}, false);
    tris_.push_back({{0, 1, 2}, {-1, -1, -1}, true});
    vert_tri_ = {0, 0, 0};
    near_tol_ = 1e-10 * h;
    max_vertices_ = opts_.max_vertices > 0
                        ? opts_.max_vertices
                        : static_cast<long>(40.0 * d.area() / (h * h) + 20.0 * d.perimeter() / h) + 10000;
  }

  TriMesh run() {
    insert_boundary();
    for (std::uint64_t k : subsegs_) seg_queue_.push_back(k);
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
      if (tris_[t].alive) tri_queue_.push_back(t);

    while (true) {
      if (static_cast<long>(pts_.size()) > max_vertices_)
        throw NumericalError("triangulate: vertex budget exhausted for '" + dom_.name() + "'");
      if (!seg_queue_.empty()) {
        const std::uint64_t k = seg_queue_.front();
        seg_queue_.pop_front();
        if (!subsegs_.count(k)) continue;
        const int a = static_cast<int>(k >> 32), b = static_cast<int>(k & 0xffffffffu);
        if (encroached(a, b)) split_subsegment(a, b);
        continue;
      }
      if (!tri_queue_.empty()) {
        const int t = tri_queue_.front();
        tri_queue_.pop_front();
        if (tris_[t].alive && is_bad(t)) refine_triangle(t);
        continue;
      }
      break;
    }
    for (std::uint64_t k : subsegs_) {
      int idx = 0;
      if (find_edge(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu), &idx) < 0)
        throw NumericalError("triangulate: boundary recovery failed for '" + dom_.name() + "'");
    }
    return extract();
  }

 private:
  bool is_super(int v) const { return v < 3; }

  int add_vertex(Point p, bool boundary) {
    pts_.push_back(p);
    on_boundary_.push_back(boundary);
    vert_tri_.push_back(-1);
    return static_cast<int>(pts_.size()) - 1;
  }

  int alloc_tri() {
    if (!free_.empty()) {
      const int t = free_.back();
      free_.pop_back();
      return t;
    }
    tris_.emplace_back();
    return static_cast<int>(tris_.size()) - 1;
  }

  int any_alive() const {
    for (int t = static_cast<int>(tris_.size()) - 1; t >= 0; --t)
      if (tris_[t].alive) return t;
    return -1;
  }

  /// Visibility walk; returns a triangle whose closure contains p, or -1.
  int locate(Point p, int start) {
    int t = (start >= 0 && start < static_cast<int>(tris_.size()) && tris_[start].alive) ? start : any_alive();
    const size_t cap = 4 * tris_.size() + 64;
    for (size_t it = 0; it < cap && t >= 0; ++it) {
      const Tri& T = tris_[t];
      rng_ = rng_ * 6364136223846793005ULL + 1442695040888963407ULL;
      const int r = static_cast<int>((rng_ >> 33) % 3);
      bool moved = false;
      for (int k = 0; k < 3; ++k) {
        const int i = (r + k) % 3;
        if (orient_robust(pts_[T.v[(i + 1) % 3]], pts_[T.v[(i + 2) % 3]], p) < 0.0) {
          t = T.nb[i];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    return -1;
  }

  bool build_cavity(Point p, int t0, Cavity& cav) {
    cav.tris.clear();
    cav.boundary.clear();
    ++epoch_;
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size() * 2, 0);
    auto in_circle = [&](int t) {
      const Tri& T = tris_[t];
      return incircle(pts_[T.v[0]], pts_[T.v[1]], pts_[T.v[2]], p) > 0.0;
    };
    mark_[t0] = epoch_;
    cav.tris.push_back(t0);
    for (size_t i = 0; i < cav.tris.size(); ++i) {
      for (int n : tris_[cav.tris[i]].nb) {
        if (n < 0 || mark_[n] == epoch_) continue;
        if (in_circle(n)) {
          mark_[n] = epoch_;
          cav.tris.push_back(n);
        }
      }
    }
    // Grow until p sees every boundary edge strictly from the inside.
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < cav.tris.size(); ++i) {
        const Tri& T = tris_[cav.tris[i]];
        for (int k = 0; k < 3; ++k) {
          const int n = T.nb[k];
          if (n >= 0 && mark_[n] == epoch_) continue;
          if (orient_robust(pts_[T.v[(k + 1) % 3]], pts_[T.v[(k + 2) % 3]], p) <= 0.0) {
            if (n < 0) return false;
            mark_[n] = epoch_;
            cav.tris.push_back(n);
            changed = true;
          }
        }
      }
    }
    for (int t : cav.tris) {
      const Tri& T = tris_[t];
      for (int k = 0; k < 3; ++k) {
        const int n = T.nb[k];
        if (n >= 0 && mark_[n] == epoch_) continue;
        cav.boundary.push_back({T.v[(k + 1) % 3], T.v[(k + 2) % 3], n});
      }
    }
    // A disk with no interior vertex has exactly two more boundary edges than triangles.
    if (cav.boundary.size() != cav.tris.size() + 2) return false;
    std::vector<int> starts;
    for (const auto& e : cav.boundary) starts.push_back(e.a);
    std::sort(starts.begin(), starts.end());
    if (std::adjacent_find(starts.begin(), starts.end()) != starts.end()) return false;
    for (const auto& e : cav.boundary)
      if (distance(pts_[e.a], p) <= near_tol_) return false;
    return true;
  }

  /// Inserts p with a precomputed cavity; returns the new vertex id.
  int commit(Point p, const Cavity& cav, bool boundary) {
    for (int t : cav.tris) {
      const Tri& T = tris_[t];
      for (int k = 0; k < 3; ++k) {
        const int a = T.v[(k + 1) % 3], b = T.v[(k + 2) % 3];
        if (subsegs_.count(edge_key(a, b))) seg_queue_.push_back(edge_key(a, b));
      }
    }
    const int vid = add_vertex(p, boundary);
    for (int t : cav.tris) {
      tris_[t].alive = false;
      free_.push_back(t);
    }
    std::vector<std::pair<int, int>> start_of, end_of;
    std::vector<int> created;
    for (const auto& e : cav.boundary) {
      const int id = alloc_tri();
      tris_[id] = Tri{{e.a, e.b, vid}, {-1, -1, e.outside}, true};
      if (e.outside >= 0) {
        Tri& O = tris_[e.outside];
        for (int j = 0; j < 3; ++j)
          if (O.v[(j + 1) % 3] == e.b && O.v[(j + 2) % 3] == e.a) O.nb[j] = id;
      }
      vert_tri_[e.a] = vert_tri_[e.b] = vert_tri_[vid] = id;
      start_of.emplace_back(e.a, id);
      end_of.emplace_back(e.b, id);
      created.push_back(id);
    }
    auto lookup = [](const std::vector<std::pair<int, int>>& m, int v) {
      for (const auto& [k, id] : m)
        if (k == v) return id;
      return -1;
    };
    for (int id : created) {
      Tri& T = tris_[id];
      T.nb[0] = lookup(start_of, T.v[1]);
      T.nb[1] = lookup(end_of, T.v[0]);
      tri_queue_.push_back(id);
    }
    last_ = created.front();
    return vid;
  }

  int insert(Point p, int hint, bool boundary) {
    const int t = locate(p, hint);
    if (t < 0) return -1;
    Cavity cav;
    if (!build_cavity(p, t, cav)) return -1;
    return commit(p, cav, boundary);
  }

  /// Triangle containing edge (a, b) with *opp set to the local index opposite it, or -1.
  int find_edge(int a, int b, int* opp) const {
    const int start = vert_tri_[a];
    if (start < 0) return -1;
    int t = start;
    for (int guard = 0; guard < 4096; ++guard) {
      const Tri& T = tris_[t];
      int i = 0;
      while (T.v[i] != a) ++i;
      if (T.v[(i + 1) % 3] == b) {
        *opp = (i + 2) % 3;
        return t;
      }
      if (T.v[(i + 2) % 3] == b) {
        *opp = (i + 1) % 3;
        return t;
      }
      t = T.nb[(i + 2) % 3];
      if (t < 0 || t == start) return -1;
    }
    return -1;
  }

  bool encroached(int a, int b) const {
    int k = 0;
    const int t = find_edge(a, b, &k);
    if (t < 0) return true;
    const int apex = tris_[t].v[k];
    if (!is_super(apex) && in_diametral_disk(pts_[apex], pts_[a], pts_[b])) return true;
    const int n = tris_[t].nb[k];
    if (n >= 0) {
      for (int w : tris_[n].v)
        if (w != a && w != b && !is_super(w) && in_diametral_disk(pts_[w], pts_[a], pts_[b])) return true;
    }
    return false;
  }

  void split_subsegment(int a, int b) {
    const Point m = (pts_[a] + pts_[b]) * 0.5;
    const int vid = insert(m, vert_tri_[a], true);
    if (vid < 0) throw NumericalError("triangulate: failed to split a boundary segment of '" + dom_.name() + "'");
    subsegs_.erase(edge_key(a, b));
    subsegs_.insert(edge_key(a, vid));
    subsegs_.insert(edge_key(vid, b));
    seg_queue_.push_back(edge_key(a, vid));
    seg_queue_.push_back(edge_key(vid, b));
  }

  bool is_bad(int t) const {
    const Tri& T = tris_[t];
    for (int v : T.v)
      if (is_super(v)) return false;
    const Point a = pts_[T.v[0]], b = pts_[T.v[1]], c = pts_[T.v[2]];
    if (!dom_.contains((a + b + c) / 3.0)) return false;
    // l[k] is the length of the edge opposite v[k].
    const double l[3] = {distance(b, c), distance(c, a), distance(a, b)};
    const double lmax = std::max({l[0], l[1], l[2]});
    if (lmax > h_ * (1.0 + 1e-12)) return true;
    const int kmin = static_cast<int>(std::min_element(l, l + 3) - l);
    const double area2 = orient(a, b, c);
    const double ratio = l[0] * l[1] * l[2] / (2.0 * area2) / l[kmin];
    if (ratio <= opts_.max_radius_edge) return false;
    // The smallest angle sits at v[kmin]; skip it when both adjacent edges are input segments.
    const int v0 = T.v[kmin], v1 = T.v[(kmin + 1) % 3], v2 = T.v[(kmin + 2) % 3];
    return !(subsegs_.count(edge_key(v0, v1)) && subsegs_.count(edge_key(v0, v2)));
  }

  void refine_triangle(int t) {
    const Tri T = tris_[t];
    const Point a = pts_[T.v[0]], b = pts_[T.v[1]], c = pts_[T.v[2]];
    const Point cc = circumcenter(a, b, c);
    const BoundingBox& box = dom_.bbox();
    const double pad = box.diagonal();
    const bool plausible = std::isfinite(cc.x) && std::isfinite(cc.y) && cc.x > box.lo.x - pad &&
                           cc.x < box.hi.x + pad && cc.y > box.lo.y - pad && cc.y < box.hi.y + pad;
    Cavity cav;
    const int tc = plausible ? locate(cc, t) : -1;
    if (tc < 0 || !build_cavity(cc, tc, cav)) {
      fallback(t);
      return;
    }
    std::vector<std::uint64_t> hit;
    for (int ct : cav.tris) {
      const Tri& C = tris_[ct];
      for (int k = 0; k < 3; ++k) {
        const int u = C.v[(k + 1) % 3], w = C.v[(k + 2) % 3];
        const std::uint64_t key = edge_key(u, w);
        if (subsegs_.count(key) && in_diametral_disk(cc, pts_[u], pts_[w])) hit.push_back(key);
      }
    }
    if (!hit.empty()) {
      std::sort(hit.begin(), hit.end());
      hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
      for (std::uint64_t key : hit)
        if (subsegs_.count(key)) split_subsegment(static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu));
      if (tris_[t].alive) tri_queue_.push_back(t);
      return;
    }
    if (!dom_.contains(cc)) {
      fallback(t);
      return;
    }
    commit(cc, cav, false);
  }

  /// Splits the longest edge of t at its midpoint when the circumcenter cannot be used.
  void fallback(int t) {
    const Tri T = tris_[t];
    int best = 0;
    double len = -1.0;
    for (int k = 0; k < 3; ++k) {
      const double l = distance(pts_[T.v[(k + 1) % 3]], pts_[T.v[(k + 2) % 3]]);
      if (l > len) {
        len = l;
        best = k;
      }
    }
    const int u = T.v[(best + 1) % 3], w = T.v[(best + 2) % 3];
    if (subsegs_.count(edge_key(u, w))) {
      split_subsegment(std::min(u, w), std::max(u, w));
      return;
    }
    const Point m = (pts_[u] + pts_[w]) * 0.5;
    if (dom_.contains(m)) insert(m, t, false);
  }

  void insert_boundary() {
    for (const Ring* ring : dom_.rings()) {
      std::vector<int> ids;
      for (Point p : *ring) {
        const int vid = insert(p, last_, true);
        if (vid < 0) throw ValidationError("triangulate: could not insert polygon vertex of '" + dom_.name() + "'");
        ids.push_back(vid);
      }
      const size_t n = ring->size();
      for (size_t i = 0; i < n; ++i) {
        const Point pa = (*ring)[i], pb = (*ring)[(i + 1) % n];
        const int pieces = std::max(1, static_cast<int>(std::ceil(distance(pa, pb) / h_ - 1e-9)));
        int prev = ids[i];
        for (int k = 1; k < pieces; ++k) {
          const Point q = pa + (pb - pa) * (static_cast<double>(k) / pieces);
          const int vid = insert(q, vert_tri_[prev], true);
          if (vid < 0) throw ValidationError("triangulate: could not insert boundary point of '" + dom_.name() + "'");
          subsegs_.insert(edge_key(prev, vid));
          prev = vid;
        }
        subsegs_.insert(edge_key(prev, ids[(i + 1) % n]));
      }
    }
  }

  TriMesh extract() const {
    std::vector<int> remap(pts_.size(), -1);
    std::vector<int> keep;
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      const Tri& T = tris_[t];
      if (!T.alive || is_super(T.v[0]) || is_super(T.v[1]) || is_super(T.v[2])) continue;
      if (!dom_.contains((pts_[T.v[0]] + pts_[T.v[1]] + pts_[T.v[2]]) / 3.0)) continue;
      keep.push_back(t);
      for (int v : T.v) remap[v] = 0;
    }
    std::vector<Point> verts;
    std::vector<bool> flags;
    for (size_t v = 0; v < pts_.size(); ++v) {
      if (remap[v] < 0) continue;
      remap[v] = static_cast<int>(verts.size());
      verts.push_back(pts_[v]);
      flags.push_back(on_boundary_[v]);
    }
    std::vector<Triangle> out;
    out.reserve(keep.size());
    for (int t : keep) {
      const Tri& T = tris_[t];
      out.push_back({remap[T.v[0]], remap[T.v[1]], remap[T.v[2]]});
    }
    return TriMesh(std::move(verts), std::move(out), std::move(flags), h_, dom_.name());
  }

  const PolygonalDomain& dom_;
  double h_;
  MeshOptions opts_;
  std::vector<Point> pts_;
  std::vector<bool> on_boundary_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::vector<int> vert_tri_;
  std::unordered_set<std::uint64_t> subsegs_;
  std::deque<std::uint64_t> seg_queue_;
  std::deque<int> tri_queue_;
  std::vector<int> mark_;
  int epoch_ = 0;
  int last_ = 0;
  std::uint64_t rng_ = 0x9e3779b97f4a7c15ULL;
  double near_tol_ = 0.0;
  long max_vertices_ = 0;
};

}  // namespace

TriMesh triangulate(const PolygonalDomain& d, double h, const MeshOptions& opts) {
  if (!(h > 0.0) || !(h < d.diameter())) throw ValidationError("triangulate: need 0 < h < Diam");
  if (!(opts.max_radius_edge >= 1.0)) throw ValidationError("triangulate: radius-edge bound must be >= 1");
  return Refiner(d, h, opts).run();
}

}  // namespace specstab
