#include "specstab/geometry/cone.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "specstab/error.hpp"

namespace specstab {

using std::numbers::pi;

namespace {

struct Probe {
  Point y;
  bool inside;
};

std::vector<Point> cone_samples(Point nu, double rho, double theta, const ConeOptions& o) {
  std::vector<Point> out;
  const double base = std::atan2(nu.y, nu.x);
  for (int i = 1; i <= o.cone_radii; ++i) {
    const double s = rho * (1.0 - 1e-9) * i / o.cone_radii;
    for (int j = 0; j < o.cone_angles; ++j) {
      const double phi = base - theta + 2.0 * theta * (j + 0.5) / o.cone_angles;
      out.push_back(Point{std::cos(phi), std::sin(phi)} * s);
    }
  }
  return out;
}

}  // namespace

ConeReport check_cone_condition(const PolygonalDomain& d, double rho, double theta, int n_samples,
                                const ConeOptions& opts) {
  if (!(rho > 0.0)) throw ValidationError("cone condition: rho must be positive");
  if (!(theta > 0.0) || theta > pi) throw ValidationError("cone condition: theta must lie in (0, pi]");
  if (n_samples < 1) throw ValidationError("cone condition: need at least one boundary sample");
  if (opts.n_directions < 1 || opts.ball_radii < 1 || opts.ball_angles < 1 || opts.cone_radii < 1 ||
      opts.cone_angles < 1)
    throw ValidationError("cone condition: sample counts must be positive");

  const double tol = 10.0 * d.tolerance();
  ConeReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();

  for (Point x : d.sample_boundary(n_samples)) {
    std::vector<Probe> ball;
    for (int i = 1; i <= opts.ball_radii; ++i) {
      const double s = 3.0 * rho * i / (opts.ball_radii + 1);
      for (int j = 0; j < opts.ball_angles; ++j) {
        const double t = 2.0 * pi * (j + 0.5) / opts.ball_angles;
        const Point y = x + Point{std::cos(t), std::sin(t)} * s;
        if (d.boundary_distance(y) <= tol) continue;
        ball.push_back({y, d.contains(y)});
      }
    }

    auto margin_for = [&](const std::vector<Point>& cone) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& p : ball)
        for (Point h : cone) {
          const double sd = d.signed_distance(p.inside ? p.y - h : p.y + h);
          m = std::min(m, p.inside ? sd : -sd);
        }
      return m;
    };
    auto admissible = [&](const std::vector<Point>& cone) {
      for (const auto& p : ball)
        for (Point h : cone) {
          const Point z = p.inside ? p.y - h : p.y + h;
          if (d.contains(z) != p.inside && d.boundary_distance(z) > tol) return false;
        }
      return true;
    };

    // Margins are only computed for the first admissible direction, or for all of them
    // when none is admissible.
    double best = -std::numeric_limits<double>::infinity();
    bool found = false;
    std::vector<std::vector<Point>> cones;
    for (int k = 0; k < opts.n_directions && !found; ++k) {
      const double a = 2.0 * pi * k / opts.n_directions;
      cones.push_back(cone_samples({std::cos(a), std::sin(a)}, rho, theta, opts));
      if (admissible(cones.back())) {
        found = true;
        best = std::max(margin_for(cones.back()), -tol);
      }
    }
    if (!found)
      for (const auto& cone : cones) best = std::max(best, std::min(margin_for(cone), -2.0 * tol));
    if (best < -tol) {
      if (rep.satisfied) rep.failing_point = x;
      rep.satisfied = false;
      ++rep.failures;
    }
    rep.worst_margin = std::min(rep.worst_margin, best);
  }
  return rep;
}

}  // namespace specstab
