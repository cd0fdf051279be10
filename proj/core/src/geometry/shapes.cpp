#include "specstab/geometry/shapes.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "specstab/error.hpp"

namespace specstab::shapes {

using std::numbers::pi;

PolygonalDomain rectangle(double x0, double y0, double x1, double y1, std::string name) {
  if (!(x1 > x0) || !(y1 > y0)) throw ValidationError("rectangle: empty extent");
  return PolygonalDomain(std::move(name), {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

PolygonalDomain unit_square() { return rectangle(0.0, 0.0, 1.0, 1.0, "unit_square"); }

PolygonalDomain l_shape() {
  return PolygonalDomain("l_shape", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {0.0, 1.0}});
}

PolygonalDomain sector(double opening, double radius, double max_chord) {
  if (!(opening > 0.0) || opening > 2.0 * pi) throw ValidationError("sector: opening must lie in (0, 2pi]");
  if (!(radius > 0.0) || !(max_chord > 0.0)) throw ValidationError("sector: radius and chord must be positive");
  if (opening >= 2.0 * pi - 1e-12) throw ValidationError("sector: a full disk is not a simple polygon with an apex");
  const int arcs = std::max(2, static_cast<int>(std::ceil(opening * radius / max_chord)));
  Ring ring{{0.0, 0.0}};
  for (int k = 0; k <= arcs; ++k) {
    const double t = -opening / 2 + opening * k / arcs;
    ring.push_back({radius * std::cos(t), radius * std::sin(t)});
  }
  return PolygonalDomain("sector", std::move(ring));
}

PolygonalDomain regular_polygon(Point center, double radius, int sides, std::string name) {
  if (sides < 3) throw ValidationError("regular_polygon: need at least 3 sides");
  Ring ring;
  for (int k = 0; k < sides; ++k) {
    const double t = 2.0 * pi * k / sides;
    ring.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
  }
  return PolygonalDomain(std::move(name), std::move(ring));
}

PolygonalDomain sawtooth_rectangle(double width, double height, int teeth, double slope) {
  if (teeth < 1) throw ValidationError("sawtooth_rectangle: need at least one tooth");
  const double half = width / (2.0 * teeth);
  const double amp = slope * half;
  Ring ring{{0.0, 0.0}, {width, 0.0}};
  for (int k = 2 * teeth; k >= 0; --k) ring.push_back({k * half, height + ((k % 2) ? amp : 0.0)});
  return PolygonalDomain("sawtooth", std::move(ring));
}

PolygonalDomain wiggle_square(double epsilon, std::uint64_t seed, int levels, int samples) {
  if (samples < 8) throw ValidationError("wiggle_square: need at least 8 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
  std::vector<double> phases(static_cast<size_t>(levels));
  for (auto& p : phases) p = phase(rng);
  auto top = [&](double x) {
    double y = 1.0;
    const double window = std::sin(pi * x);
    for (int l = 0; l < levels; ++l) {
      const double r = std::ldexp(0.5, -l);
      y += window * epsilon * r / 2.0 * std::sin(2.0 * pi * x / r + phases[l]);
    }
    return y;
  };
  Ring ring{{0.0, 0.0}, {1.0, 0.0}};
  for (int k = samples; k >= 0; --k) {
    const double x = static_cast<double>(k) / samples;
    ring.push_back({x, top(x)});
  }
  return PolygonalDomain("wiggle", std::move(ring));
}

}  // namespace specstab::shapes
