#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

#include "specstab/geometry/domain.hpp"
#include "specstab/meshing/triangulate.hpp"
#include "specstab/stability/projection.hpp"

namespace specstab {

struct DomainPair {
  PolygonalDomain a;
  PolygonalDomain b;
};

/// Produces the pair of domains for one perturbation size.
using DomainFamily = std::function<DomainPair(double delta)>;

struct StabilityRecord {
  double delta = 0.0;  ///< family parameter
  double delta_complement = 0.0;
  double delta_sets = 0.0;
  double perimeter = 0.0;  ///< perimeter of Omega_b
  std::vector<double> lambda_a;
  std::vector<double> lambda_b;
  std::vector<double> gaps;  ///< |lambda_a - lambda_b|
  double A_hat = 0.0;        ///< a projected from b
  double B_hat = 0.0;
  std::vector<double> bound;  ///< abstract bound on lambda_a per k
  double mu_star = 0.0;       ///< max(lambda_n^a, lambda_n^b)
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double fit_residual = std::numeric_limits<double>::quiet_NaN();
};

enum class DeltaKind { Complement, Sets, Max };

struct FitResult {
  double alpha = 0.0;
  double C = 0.0;
  double residual = 0.0;  ///< root mean square of the log residuals
  int used = 0;
};

/// Least-squares fit log(gap_k) = log C + alpha log(delta); records with delta or gap_k
/// below 1e-10 are skipped. Needs three survivors with at least two distinct deltas.
FitResult fit_exponent(const std::vector<StabilityRecord>& records, int k, DeltaKind which);

struct FamilyOptions {
  EigenOptions eig;
  CrossOptions cross;
  MeshOptions mesh;
  /// Also project a from b with the roles exchanged.
  bool both_orientations = true;
  double hausdorff_resolution = 0.0;
  /// Called after each delta completes, with the record and its reports.
  std::function<void(const StabilityRecord&, const std::vector<ProjectionReport>&)> on_record;
};

struct FamilyResult {
  std::vector<StabilityRecord> records;
  /// Per delta: a projected from b, then (if requested) b projected from a.
  std::vector<ProjectionReport> reports;
  /// Per k (1-based k at index k-1); empty when fewer than three records survive.
  std::vector<FitResult> fits;
  /// Largest delta whose forward report is feasible (0 when none).
  double feasibility_frontier = 0.0;
};

FamilyResult run_stability_family(const DomainFamily& family, const std::vector<double>& deltas, int n,
                                  BoundaryKind kind, double h, const FamilyOptions& opts = {});

/// Header delta_complement,delta_sets,gap_1..gap_n,A_hat,B_hat,bound_1..bound_n.
void write_records_csv(std::ostream& os, const std::vector<StabilityRecord>& records);

}  // namespace specstab
