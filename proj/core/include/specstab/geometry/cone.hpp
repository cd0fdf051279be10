#pragma once

#include "specstab/geometry/domain.hpp"

namespace specstab {

struct ConeOptions {
  int n_directions = 72;
  int ball_radii = 6;    ///< radial samples of B(x, 3 rho)
  int ball_angles = 24;  ///< angular samples of B(x, 3 rho)
  int cone_radii = 3;
  int cone_angles = 7;
};

struct ConeReport {
  bool satisfied = true;
  /// min over boundary samples of the best direction's margin (signed distance of the
  /// translated points into the side they must stay on). Negative means a violation.
  double worst_margin = 0.0;
  Point failing_point;  ///< first boundary sample with no admissible direction
  int failures = 0;
};

/// Sampled uniform (rho, theta)-cone condition: every boundary sample x needs a unit vector
/// nu such that y - h stays in the domain for y in B(x,3rho) inside, and y + h stays outside
/// for y in B(x,3rho) outside, for all h in the open cone {h.nu > |h| cos theta, |h| < rho}.
ConeReport check_cone_condition(const PolygonalDomain& d, double rho, double theta, int n_samples,
                                const ConeOptions& opts = {});

}  // namespace specstab
