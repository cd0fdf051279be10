#pragma once

#include <vector>

#include "specstab/geometry/domain.hpp"

namespace specstab {

/// A line through a boundary point and its normalized two-sided Hausdorff distance to the
/// boundary inside a ball: d_H(bdry cap B(x,r), P cap B(x,r)) / r.
struct LineFit {
  double angle = 0.0;      ///< direction of the line, in [0, pi)
  double deviation = 0.0;  ///< normalized two-sided distance
  double boundary_length = 0.0;  ///< length of bdry cap B(x,r)
};

struct FlatnessOptions {
  int n_boundary = 256;
  int n_scales = 16;
  int n_angles = 64;
  /// Smallest scale as a fraction of r0.
  double min_scale_ratio = 0.01;
  /// Points sampled along each candidate line for the line-to-boundary term.
  int chord_samples = 64;
  /// Golden-section refinement around the best grid angle.
  bool refine = true;
  /// If nonempty, these boundary points are used instead of uniform arc-length samples.
  std::vector<Point> sample_points;
};

struct FlatnessReport {
  double epsilon_hat = 0.0;
  double r0 = 0.0;
  Point worst_point;
  double worst_scale = 0.0;
  /// Separation with the flatness-minimizing line at scale r0.
  bool separation_ok = true;
  /// Separation witnessed by some candidate line at scale r0 (not necessarily the minimizer).
  bool separation_any_ok = true;
  int skipped = 0;   ///< (x, r) pairs skipped because the boundary arc in the ball is shorter than r
  int evaluated = 0;
};

/// Best line through x at scale r. Distance term uses `chord_samples` points plus a local
/// refinement; the angle search uses `n_angles` candidates plus golden-section refinement.
LineFit best_line(const PolygonalDomain& d, Point x, double r, int n_angles, int chord_samples = 64,
                  bool refine = true);

/// Normalized two-sided distance for one candidate line direction.
double line_deviation(const PolygonalDomain& d, Point x, double r, double angle, int chord_samples = 64);

FlatnessReport estimate_reifenberg_flatness(const PolygonalDomain& d, double r0, const FlatnessOptions& opts = {});

FlatnessReport estimate_reifenberg_flatness(const PolygonalDomain& d, double r0, int n_boundary, int n_scales,
                                            int n_angles);

}  // namespace specstab
