#include "specstab/geometry/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "boundary_index.hpp"
#include "specstab/error.hpp"

namespace specstab {

double signed_area(const Ring& ring) {
  double acc = 0.0;
  const size_t n = ring.size();
  for (size_t i = 0; i < n; ++i) acc += cross(ring[i], ring[(i + 1) % n]);
  return 0.5 * acc;
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const double d1 = orient(c, d, a), d2 = orient(c, d, b);
  const double d3 = orient(a, b, c), d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on_seg = [](Point p, Point q, Point r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  if (d1 == 0 && on_seg(c, d, a)) return true;
  if (d2 == 0 && on_seg(c, d, b)) return true;
  if (d3 == 0 && on_seg(a, b, c)) return true;
  if (d4 == 0 && on_seg(a, b, d)) return true;
  return false;
}

namespace {

double segment_segment_distance(Point a, Point b, Point c, Point d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({segment_distance(a, c, d), segment_distance(b, c, d), segment_distance(c, a, b),
                   segment_distance(d, a, b)});
}

std::string where(int ring, int index) {
  std::ostringstream os;
  os << (ring == 0 ? std::string("outer ring") : "hole " + std::to_string(ring - 1)) << " edge " << index;
  return os.str();
}

}  // namespace

PolygonalDomain::PolygonalDomain(std::string name, Ring outer, std::vector<Ring> holes)
    : name_(std::move(name)), outer_(std::move(outer)), holes_(std::move(holes)) {
  if (outer_.size() < 3) throw ValidationError("domain '" + name_ + "': outer ring needs at least 3 vertices");
  for (size_t h = 0; h < holes_.size(); ++h) {
    if (holes_[h].size() < 3)
      throw ValidationError("domain '" + name_ + "': hole " + std::to_string(h) + " needs at least 3 vertices");
  }
  for (const Ring* ring : rings()) {
    for (Point p : *ring) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw ValidationError("domain '" + name_ + "': non-finite coordinate");
    }
  }

  bbox_.lo = bbox_.hi = outer_.front();
  for (Point p : outer_) {
    bbox_.lo.x = std::min(bbox_.lo.x, p.x);
    bbox_.lo.y = std::min(bbox_.lo.y, p.y);
    bbox_.hi.x = std::max(bbox_.hi.x, p.x);
    bbox_.hi.y = std::max(bbox_.hi.y, p.y);
  }
  for (size_t i = 0; i < outer_.size(); ++i)
    for (size_t j = i + 1; j < outer_.size(); ++j) diameter_ = std::max(diameter_, distance(outer_[i], outer_[j]));

  const auto all = rings();
  for (int r = 0; r < static_cast<int>(all.size()); ++r) {
    const Ring& ring = *all[r];
    const int n = static_cast<int>(ring.size());
    for (int i = 0; i < n; ++i) {
      edges_.push_back({ring[i], ring[(i + 1) % n], r, i});
      edge_start_arclength_.push_back(perimeter_);
      perimeter_ += distance(ring[i], ring[(i + 1) % n]);
    }
  }
  area_ = signed_area(outer_);
  for (const auto& h : holes_) area_ += signed_area(h);

  index_ = std::make_shared<BoundaryIndex>(edges_);
  validate();
}

std::vector<const Ring*> PolygonalDomain::rings() const {
  std::vector<const Ring*> out{&outer_};
  for (const auto& h : holes_) out.push_back(&h);
  return out;
}

void PolygonalDomain::validate() const {
  const double tol = tolerance();
  const std::string tag = "domain '" + name_ + "': ";
  if (signed_area(outer_) <= 0.0) throw ValidationError(tag + "outer ring must be counterclockwise with positive area");
  for (size_t h = 0; h < holes_.size(); ++h) {
    if (signed_area(holes_[h]) >= 0.0)
      throw ValidationError(tag + "hole " + std::to_string(h) + " must be clockwise");
  }
  for (const auto& e : edges_) {
    if (distance(e.a, e.b) <= tol) throw ValidationError(tag + "zero-length edge at " + where(e.ring, e.index));
  }

  // Pairwise edge checks: crossings, overlaps, near-duplicate vertices, slivers.
  std::vector<int> cand;
  const auto ring_size = [&](int r) { return static_cast<int>(r == 0 ? outer_.size() : holes_[r - 1].size()); };
  for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
    const auto& e = edges_[id];
    BoundingBox box{{std::min(e.a.x, e.b.x) - tol, std::min(e.a.y, e.b.y) - tol},
                    {std::max(e.a.x, e.b.x) + tol, std::max(e.a.y, e.b.y) + tol}};
    index_->candidates(box, cand);
    for (int other : cand) {
      if (other <= id) continue;
      const auto& f = edges_[other];
      bool adjacent = false;
      if (e.ring == f.ring) {
        const int n = ring_size(e.ring);
        adjacent = (e.index + 1) % n == f.index || (f.index + 1) % n == e.index;
      }
      if (adjacent) {
        // Consecutive edges share one vertex; reject folds back onto the previous edge.
        const bool e_first = (e.index + 1) % ring_size(e.ring) == f.index;
        const Point pe = e_first ? e.a : e.b;
        const Point pf = e_first ? f.b : f.a;
        if (segment_distance(pf, e.a, e.b) <= tol || segment_distance(pe, f.a, f.b) <= tol)
          throw ValidationError(tag + "degenerate fold between " + where(e.ring, e.index) + " and " +
                                where(f.ring, f.index));
        continue;
      }
      if (segment_segment_distance(e.a, e.b, f.a, f.b) <= tol)
        throw ValidationError(tag + "self-intersection or sliver between " + where(e.ring, e.index) + " and " +
                              where(f.ring, f.index));
    }
  }

  // Holes strictly inside the outer ring and not nested in one another.
  for (size_t h = 0; h < holes_.size(); ++h) {
    const Point probe = holes_[h].front();
    bool in_outer = false;
    const size_t n = outer_.size();
    for (size_t i = 0; i < n; ++i) {
      const Point a = outer_[i], b = outer_[(i + 1) % n];
      if ((a.y > probe.y) != (b.y > probe.y) && probe.x < a.x + (probe.y - a.y) * (b.x - a.x) / (b.y - a.y))
        in_outer = !in_outer;
    }
    if (!in_outer) throw ValidationError(tag + "hole " + std::to_string(h) + " is not inside the outer ring");
    for (size_t g = 0; g < holes_.size(); ++g) {
      if (g == h) continue;
      bool in_other = false;
      const auto& ring = holes_[g];
      for (size_t i = 0; i < ring.size(); ++i) {
        const Point a = ring[i], b = ring[(i + 1) % ring.size()];
        if ((a.y > probe.y) != (b.y > probe.y) && probe.x < a.x + (probe.y - a.y) * (b.x - a.x) / (b.y - a.y))
          in_other = !in_other;
      }
      if (in_other)
        throw ValidationError(tag + "hole " + std::to_string(h) + " lies inside hole " + std::to_string(g));
    }
  }
}

bool PolygonalDomain::contains(Point p) const { return index_->odd_crossings(p); }

double PolygonalDomain::boundary_distance(Point p) const { return index_->nearest(p, nullptr); }

double PolygonalDomain::signed_distance(Point p) const {
  const double d = boundary_distance(p);
  return contains(p) ? d : -d;
}

Point PolygonalDomain::closest_boundary_point(Point p, int* edge) const {
  int id = -1;
  index_->nearest(p, &id);
  if (edge) *edge = id;
  return segment_closest(p, edges_[id].a, edges_[id].b);
}

Point PolygonalDomain::boundary_point(double s, int* edge) const {
  s = std::fmod(s, perimeter_);
  if (s < 0) s += perimeter_;
  auto it = std::upper_bound(edge_start_arclength_.begin(), edge_start_arclength_.end(), s);
  const int id = static_cast<int>(std::distance(edge_start_arclength_.begin(), it)) - 1;
  const auto& e = edges_[id];
  const double len = distance(e.a, e.b);
  const double t = std::clamp((s - edge_start_arclength_[id]) / len, 0.0, 1.0);
  if (edge) *edge = id;
  return e.a + (e.b - e.a) * t;
}

std::vector<Point> PolygonalDomain::sample_boundary(int n) const {
  std::vector<Point> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(boundary_point(perimeter_ * i / n));
  return out;
}

std::vector<int> PolygonalDomain::edges_near(const BoundingBox& box) const {
  std::vector<int> out;
  index_->candidates(box, out);
  return out;
}

Point PolygonalDomain::inward_normal(int edge) const {
  const auto& e = edges_.at(static_cast<size_t>(edge));
  const Point t = (e.b - e.a) / distance(e.a, e.b);
  // Outer ring is counterclockwise and holes clockwise, so the interior is always on the left.
  return {-t.y, t.x};
}

PolygonalDomain PolygonalDomain::translated(Point shift) const {
  auto move = [&](Ring r) {
    for (auto& p : r) p += shift;
    return r;
  };
  std::vector<Ring> holes;
  for (const auto& h : holes_) holes.push_back(move(h));
  return PolygonalDomain(name_, move(outer_), std::move(holes));
}

PolygonalDomain PolygonalDomain::scaled(double factor) const {
  if (!(factor > 0.0)) throw ValidationError("scale factor must be positive");
  auto scale = [&](Ring r) {
    for (auto& p : r) p = p * factor;
    return r;
  };
  std::vector<Ring> holes;
  for (const auto& h : holes_) holes.push_back(scale(h));
  return PolygonalDomain(name_, scale(outer_), std::move(holes));
}

}  // namespace specstab
