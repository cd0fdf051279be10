#include "specstab/geometry/flatness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "specstab/error.hpp"

namespace specstab {

using std::numbers::pi;

namespace {

struct Piece {
  Point a;
  Point b;
};

/// Boundary edges clipped to the closed disk B(x, r).
std::vector<Piece> clip_boundary(const PolygonalDomain& d, Point x, double r) {
  std::vector<Piece> out;
  const BoundingBox box{{x.x - r, x.y - r}, {x.x + r, x.y + r}};
  for (int id : d.edges_near(box)) {
    const auto& e = d.edges()[id];
    const Point ab = e.b - e.a;
    const Point ax = e.a - x;
    const double qa = dot(ab, ab);
    const double qb = 2.0 * dot(ab, ax);
    const double qc = dot(ax, ax) - r * r;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= 0.0) continue;
    const double sq = std::sqrt(disc);
    const double t0 = std::max(0.0, (-qb - sq) / (2.0 * qa));
    const double t1 = std::min(1.0, (-qb + sq) / (2.0 * qa));
    if (t1 <= t0) continue;
    out.push_back({e.a + ab * t0, e.a + ab * t1});
  }
  return out;
}

double distance_to_pieces(Point z, const std::vector<Piece>& pieces) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) best = std::min(best, segment_distance(z, p.a, p.b));
  return best;
}

template <class F>
double golden_max(F&& f, double lo, double hi, int iters) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), dd = a + g * (b - a);
  double fc = f(c), fd = f(dd);
  double best = std::max(fc, fd);
  for (int k = 0; k < iters; ++k) {
    if (fc > fd) {
      b = dd;
      dd = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = dd;
      fc = fd;
      dd = a + g * (b - a);
      fd = f(dd);
    }
    best = std::max({best, fc, fd});
  }
  return best;
}

double deviation_for(const std::vector<Piece>& pieces, Point x, double r, double angle, int chord_samples) {
  const Point u{std::cos(angle), std::sin(angle)};
  const Point n{-u.y, u.x};
  double far_from_line = 0.0;
  for (const auto& p : pieces)
    far_from_line = std::max({far_from_line, std::abs(dot(p.a - x, n)), std::abs(dot(p.b - x, n))});

  // sup over the diameter of the distance to the clipped boundary: dense samples, then a
  // golden-section refinement in the bracket of the largest sample.
  const int m = std::max(chord_samples, 3);
  auto along = [&](double t) { return distance_to_pieces(x + u * t, pieces); };
  double far_from_boundary = 0.0;
  int arg = 0;
  const double step = 2.0 * r / (m - 1);
  for (int k = 0; k < m; ++k) {
    const double v = along(-r + step * k);
    if (v > far_from_boundary) {
      far_from_boundary = v;
      arg = k;
    }
  }
  const double lo = std::max(-r, -r + step * (arg - 1));
  const double hi = std::min(r, -r + step * (arg + 1));
  far_from_boundary = std::max(far_from_boundary, golden_max(along, lo, hi, 30));
  return std::max(far_from_line, far_from_boundary) / r;
}

double total_length(const std::vector<Piece>& pieces) {
  double len = 0.0;
  for (const auto& p : pieces) len += distance(p.a, p.b);
  return len;
}

}  // namespace

double line_deviation(const PolygonalDomain& d, Point x, double r, double angle, int chord_samples) {
  return deviation_for(clip_boundary(d, x, r), x, r, angle, chord_samples);
}

LineFit best_line(const PolygonalDomain& d, Point x, double r, int n_angles, int chord_samples, bool refine) {
  if (!(r > 0.0)) throw ValidationError("best_line: radius must be positive");
  if (n_angles < 1) throw ValidationError("best_line: need at least one candidate angle");
  const auto pieces = clip_boundary(d, x, r);
  LineFit fit;
  fit.boundary_length = total_length(pieces);
  if (pieces.empty()) {
    fit.deviation = std::numeric_limits<double>::infinity();
    return fit;
  }
  auto f = [&](double a) { return deviation_for(pieces, x, r, a, chord_samples); };
  fit.deviation = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_angles; ++k) {
    const double a = pi * k / n_angles;
    const double v = f(a);
    if (v < fit.deviation) {
      fit.deviation = v;
      fit.angle = a;
    }
  }
  if (refine) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = fit.angle - pi / n_angles, hi = fit.angle + pi / n_angles;
    double c = hi - g * (hi - lo), e = lo + g * (hi - lo);
    double fc = f(c), fe = f(e);
    for (int k = 0; k < 40; ++k) {
      if (fc < fe) {
        hi = e;
        e = c;
        fe = fc;
        c = hi - g * (hi - lo);
        fc = f(c);
      } else {
        lo = c;
        c = e;
        fc = fe;
        e = lo + g * (hi - lo);
        fe = f(e);
      }
    }
    // Refinement may only lower the estimate.
    const double a = fc < fe ? c : e;
    const double v = std::min(fc, fe);
    if (v < fit.deviation) {
      fit.deviation = v;
      fit.angle = std::fmod(a + pi, pi);
    }
  }
  return fit;
}

namespace {

/// Condition (ii) for one line: points of B(x, r0) at distance >= 2 eps r0 from the line
/// must be inside on one side and outside on the other.
bool separates(const PolygonalDomain& d, Point x, double r0, double angle, double eps) {
  const Point u{std::cos(angle), std::sin(angle)};
  const Point n{-u.y, u.x};
  const double strip = 2.0 * eps * r0;
  if (strip >= r0) return true;
  int plus_in = 0, plus_out = 0, minus_in = 0, minus_out = 0;
  constexpr int radial = 8, angular = 32;
  for (int i = 1; i <= radial; ++i) {
    const double rho = r0 * (i - 0.5) / radial;
    for (int j = 0; j < angular; ++j) {
      const double t = 2.0 * pi * (j + 0.5) / angular;
      const Point p = x + Point{std::cos(t), std::sin(t)} * rho;
      const double side = dot(p - x, n);
      if (std::abs(side) < strip) continue;
      const bool in = d.contains(p);
      if (side > 0) (in ? plus_in : plus_out)++;
      else (in ? minus_in : minus_out)++;
    }
  }
  const bool plus_inside = plus_out == 0 && minus_in == 0;
  const bool plus_outside = plus_in == 0 && minus_out == 0;
  return plus_inside || plus_outside;
}

}  // namespace

FlatnessReport estimate_reifenberg_flatness(const PolygonalDomain& d, double r0, const FlatnessOptions& opts) {
  if (!(r0 > 0.0) || r0 >= d.diameter()) throw ValidationError("flatness: need 0 < r0 < Diam");
  if (opts.n_boundary < 8 && opts.sample_points.empty()) throw ValidationError("flatness: need >= 8 boundary samples");
  if (opts.n_scales < 1 || opts.n_angles < 8) throw ValidationError("flatness: need >= 1 scale and >= 8 angles");

  const std::vector<Point> samples = opts.sample_points.empty() ? d.sample_boundary(opts.n_boundary) : opts.sample_points;
  FlatnessReport rep;
  rep.r0 = r0;
  rep.epsilon_hat = 0.0;
  std::vector<double> r0_angles(samples.size(), 0.0);

  for (size_t s = 0; s < samples.size(); ++s) {
    const Point x = samples[s];
    for (int k = 0; k < opts.n_scales; ++k) {
      const double r =
          opts.n_scales == 1 ? r0 : r0 * std::pow(opts.min_scale_ratio, static_cast<double>(k) / (opts.n_scales - 1));
      const LineFit fit = best_line(d, x, r, opts.n_angles, opts.chord_samples, opts.refine);
      if (fit.boundary_length < r) {
        ++rep.skipped;
        continue;
      }
      ++rep.evaluated;
      if (k == 0) r0_angles[s] = fit.angle;
      if (fit.deviation > rep.epsilon_hat) {
        rep.epsilon_hat = fit.deviation;
        rep.worst_point = x;
        rep.worst_scale = r;
      }
    }
  }

  rep.separation_ok = true;
  rep.separation_any_ok = true;
  for (size_t s = 0; s < samples.size(); ++s) {
    const Point x = samples[s];
    if (!separates(d, x, r0, r0_angles[s], rep.epsilon_hat)) rep.separation_ok = false;
    bool any = false;
    for (int k = 0; k < opts.n_angles && !any; ++k) any = separates(d, x, r0, pi * k / opts.n_angles, rep.epsilon_hat);
    if (!any) rep.separation_any_ok = false;
  }
  return rep;
}

FlatnessReport estimate_reifenberg_flatness(const PolygonalDomain& d, double r0, int n_boundary, int n_scales,
                                            int n_angles) {
  FlatnessOptions opts;
  opts.n_boundary = n_boundary;
  opts.n_scales = n_scales;
  opts.n_angles = n_angles;
  return estimate_reifenberg_flatness(d, r0, opts);
}

}  // namespace specstab
