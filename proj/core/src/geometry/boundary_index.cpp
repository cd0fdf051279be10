#include "boundary_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specstab {

BoundaryIndex::BoundaryIndex(std::vector<Segment> segments) : edges_(std::move(segments)) {
  const auto& edges = edges_;
  box_.lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  box_.hi = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const auto& e : edges) {
    for (Point p : {e.a, e.b}) {
      box_.lo.x = std::min(box_.lo.x, p.x);
      box_.lo.y = std::min(box_.lo.y, p.y);
      box_.hi.x = std::max(box_.hi.x, p.x);
      box_.hi.y = std::max(box_.hi.y, p.y);
    }
  }
  const double pad = 1e-9 * std::max(1.0, box_.diagonal());
  box_.lo = box_.lo - Point{pad, pad};
  box_.hi = box_.hi + Point{pad, pad};

  const double side = std::ceil(std::sqrt(static_cast<double>(edges.size())));
  const double aspect = box_.width() / std::max(box_.height(), 1e-300);
  nx_ = std::clamp(static_cast<int>(side * std::sqrt(aspect)), 1, 1024);
  ny_ = std::clamp(static_cast<int>(side / std::sqrt(aspect)), 1, 1024);
  cw_ = box_.width() / nx_;
  ch_ = box_.height() / ny_;
  cells_.assign(static_cast<size_t>(nx_) * ny_, {});
  rows_.assign(static_cast<size_t>(ny_), {});

  for (int id = 0; id < static_cast<int>(edges.size()); ++id) {
    const auto& e = edges[id];
    const int x0 = cell_x(std::min(e.a.x, e.b.x)), x1 = cell_x(std::max(e.a.x, e.b.x));
    const int y0 = cell_y(std::min(e.a.y, e.b.y)), y1 = cell_y(std::max(e.a.y, e.b.y));
    for (int j = y0; j <= y1; ++j) {
      rows_[j].push_back(id);
      for (int i = x0; i <= x1; ++i) cells_[static_cast<size_t>(j) * nx_ + i].push_back(id);
    }
  }
}

int BoundaryIndex::cell_x(double x) const {
  return std::clamp(static_cast<int>(std::floor((x - box_.lo.x) / cw_)), 0, nx_ - 1);
}

int BoundaryIndex::cell_y(double y) const {
  return std::clamp(static_cast<int>(std::floor((y - box_.lo.y) / ch_)), 0, ny_ - 1);
}

double BoundaryIndex::nearest(Point p, int* edge_out) const {
  const auto& edges = edges_;
  const int cx = cell_x(p.x), cy = cell_y(p.y);
  double best = std::numeric_limits<double>::infinity();
  int best_id = -1;
  auto visit = [&](int i, int j) {
    for (int id : cells_[static_cast<size_t>(j) * nx_ + i]) {
      const double d = segment_distance(p, edges[id].a, edges[id].b);
      if (d < best || (d == best && id < best_id)) {
        best = d;
        best_id = id;
      }
    }
  };
  for (int k = 0;; ++k) {
    const int i0 = cx - k, i1 = cx + k, j0 = cy - k, j1 = cy + k;
    for (int j = std::max(j0, 0); j <= std::min(j1, ny_ - 1); ++j) {
      for (int i = std::max(i0, 0); i <= std::min(i1, nx_ - 1); ++i) {
        if (k > 0 && i != i0 && i != i1 && j != j0 && j != j1) continue;
        visit(i, j);
      }
    }
    // Lower bound on the distance to any cell outside the examined block.
    double bound = std::numeric_limits<double>::infinity();
    bool remaining = false;
    if (i0 > 0) {
      remaining = true;
      bound = std::min(bound, std::max(0.0, p.x - (box_.lo.x + i0 * cw_)));
    }
    if (i1 < nx_ - 1) {
      remaining = true;
      bound = std::min(bound, std::max(0.0, (box_.lo.x + (i1 + 1) * cw_) - p.x));
    }
    if (j0 > 0) {
      remaining = true;
      bound = std::min(bound, std::max(0.0, p.y - (box_.lo.y + j0 * ch_)));
    }
    if (j1 < ny_ - 1) {
      remaining = true;
      bound = std::min(bound, std::max(0.0, (box_.lo.y + (j1 + 1) * ch_) - p.y));
    }
    if (!remaining || (best_id >= 0 && best <= bound)) break;
  }
  if (edge_out) *edge_out = best_id;
  return best;
}

bool BoundaryIndex::odd_crossings(Point p) const {
  if (p.y < box_.lo.y || p.y > box_.hi.y || p.x > box_.hi.x) return false;
  const auto& edges = edges_;
  bool inside = false;
  for (int id : rows_[cell_y(p.y)]) {
    const Point a = edges[id].a, b = edges[id].b;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xi = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xi) inside = !inside;
    }
  }
  return inside;
}

void BoundaryIndex::candidates(const BoundingBox& box, std::vector<int>& out) const {
  out.clear();
  if (box.hi.x < box_.lo.x || box.lo.x > box_.hi.x || box.hi.y < box_.lo.y || box.lo.y > box_.hi.y) return;
  for (int j = cell_y(box.lo.y); j <= cell_y(box.hi.y); ++j) {
    for (int i = cell_x(box.lo.x); i <= cell_x(box.hi.x); ++i) {
      const auto& cell = cells_[static_cast<size_t>(j) * nx_ + i];
      out.insert(out.end(), cell.begin(), cell.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace specstab
