#include "specstab/geometry/covering.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "specstab/error.hpp"

namespace specstab {

double cutoff_outer(double t) {
  if (t <= 1.0) return 0.0;
  if (t <= 1.5) return 2.0 * (t - 1.0);
  return 1.0;
}

double cutoff_inner(double t) {
  if (t <= 1.5) return 1.0;
  if (t <= 2.0) return -2.0 * (t - 2.0);
  return 0.0;
}

namespace {

/// Hash grid of accepted centers with cell size equal to the exclusion radius.
class CenterGrid {
 public:
  explicit CenterGrid(double cell) : cell_(cell) {}

  void add(int id, Point p) { cells_[key(cell_of(p.x), cell_of(p.y))].push_back(id); }

  template <class F>
  void near(Point lo, Point hi, F&& f) const {
    for (long long i = cell_of(lo.x) - 1; i <= cell_of(hi.x) + 1; ++i)
      for (long long j = cell_of(lo.y) - 1; j <= cell_of(hi.y) + 1; ++j) {
        auto it = cells_.find(key(i, j));
        if (it == cells_.end()) continue;
        for (int id : it->second) f(id);
      }
  }

 private:
  long long cell_of(double v) const { return static_cast<long long>(std::floor(v / cell_)); }
  static long long key(long long i, long long j) { return i * 73856093LL ^ j * 19349663LL; }

  double cell_;
  std::unordered_map<long long, std::vector<int>> cells_;
};

}  // namespace

Covering build_covering(const PolygonalDomain& d, double r) {
  if (!(r > 0.0)) throw ValidationError("covering: radius must be positive");
  if (r >= d.perimeter()) throw ValidationError("covering: radius must be smaller than the perimeter");

  const double excl = r / 5.0;
  Covering cov;
  cov.radius = r;
  CenterGrid grid(excl);

  // The key collisions of CenterGrid only add candidates, never drop them, so the interval
  // list per edge stays a superset of the relevant disks.
  for (const auto& e : d.edges()) {
    const Point ab = e.b - e.a;
    const double len = norm(ab);
    const double nudge = 1e-12 * r / len;
    std::vector<std::pair<double, double>> covered;
    auto add_interval = [&](Point c) {
      const Point ac = e.a - c;
      const double qa = len * len, qb = 2.0 * dot(ab, ac), qc = dot(ac, ac) - excl * excl;
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc <= 0.0) return;
      const double sq = std::sqrt(disc);
      covered.emplace_back((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa));
    };
    const Point lo{std::min(e.a.x, e.b.x) - excl, std::min(e.a.y, e.b.y) - excl};
    const Point hi{std::max(e.a.x, e.b.x) + excl, std::max(e.a.y, e.b.y) + excl};
    grid.near(lo, hi, [&](int id) { add_interval(cov.centers[static_cast<size_t>(id)]); });

    double t = 0.0;
    while (true) {
      // Advance t past every open disk that contains it.
      bool moved = true;
      while (moved) {
        moved = false;
        for (const auto& [t0, t1] : covered) {
          if (t0 < t && t < t1) {
            t = t1 + nudge;
            moved = true;
          }
        }
      }
      if (t > 1.0) break;
      const Point p = e.a + ab * t;
      // Guard against rounding in the interval endpoints.
      bool clear = true;
      grid.near(p, p, [&](int id) {
        if (distance(p, cov.centers[static_cast<size_t>(id)]) < excl) clear = false;
      });
      if (!clear) {
        t += nudge;
        continue;
      }
      const int id = static_cast<int>(cov.centers.size());
      cov.centers.push_back(p);
      grid.add(id, p);
      add_interval(p);
    }
  }
  cov.count = static_cast<int>(cov.centers.size());
  cov.c_cov = cov.count * r / d.perimeter();
  return cov;
}

std::vector<double> partition_of_unity(const Covering& cov, Point x) {
  if (cov.centers.empty() || !(cov.radius > 0.0)) throw ValidationError("partition of unity: empty covering");
  const size_t n = cov.centers.size();
  std::vector<double> theta(n + 1);
  double psi0 = 1.0;
  for (size_t i = 0; i < n; ++i) {
    const double t = distance(x, cov.centers[i]) / cov.radius;
    psi0 *= cutoff_outer(t);
    theta[i + 1] = cutoff_inner(t);
  }
  theta[0] = psi0;
  double sum = 0.0;
  for (double v : theta) sum += v;
  for (double& v : theta) v /= sum;
  return theta;
}

}  // namespace specstab
