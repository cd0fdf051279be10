#pragma once

#include <cstdint>

#include "specstab/geometry/domain.hpp"

namespace specstab::shapes {

PolygonalDomain rectangle(double x0, double y0, double x1, double y1, std::string name = "rectangle");
PolygonalDomain unit_square();
/// (0,1)^2 minus [0.5,1)^2.
PolygonalDomain l_shape();
/// Circular sector of the given opening, apex at the origin, bisector along +x.
/// The arc is split into chords no longer than max_chord.
PolygonalDomain sector(double opening, double radius, double max_chord);
/// Regular n-gon inscribed in the circle of given center and radius.
PolygonalDomain regular_polygon(Point center, double radius, int sides, std::string name = "disk");
/// Rectangle (0,width) x (0,height) whose top edge is a zigzag with the given number of
/// teeth and slope; apexes rise slope * width / (2 teeth) above the top.
PolygonalDomain sawtooth_rectangle(double width, double height, int teeth, double slope);
/// Unit square whose top edge carries a seeded multiscale perturbation: at each dyadic
/// scale r_l = 2^-l / 2 a sinusoid of amplitude epsilon * r_l / 2 and period r_l,
/// windowed to vanish at the corners. Top edge sampled with `samples` vertices.
PolygonalDomain wiggle_square(double epsilon, std::uint64_t seed, int levels = 4, int samples = 400);

}  // namespace specstab::shapes
