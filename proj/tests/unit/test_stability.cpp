#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <utility>

#include "specstab/error.hpp"
#include "specstab/geometry/covering.hpp"
#include "specstab/geometry/shapes.hpp"
#include "specstab/meshing/triangulate.hpp"
#include "specstab/stability/family.hpp"
#include "specstab/stability/transfer.hpp"

using namespace specstab;
using std::numbers::pi;

namespace {

std::shared_ptr<const TriMesh> mesh_of(const PolygonalDomain& d, double h) {
  return std::make_shared<const TriMesh>(triangulate(d, h));
}

std::shared_ptr<const TriMesh> rotated(const TriMesh& m, double angle) {
  std::vector<Point> v;
  for (Point p : m.vertices())
    v.push_back({std::cos(angle) * p.x - std::sin(angle) * p.y, std::sin(angle) * p.x + std::cos(angle) * p.y});
  return std::make_shared<const TriMesh>(TriMesh(v, m.triangles(), m.boundary_flags(), m.h_target()));
}

/// Integral of a polynomial of degree <= 3 per variable over [x0,x1]x[y0,y1] by 2x2 Gauss.
template <class F>
double gauss_rect(double x0, double y0, double x1, double y1, F&& f) {
  const double g = 1.0 / std::sqrt(3.0);
  double s = 0.0;
  for (double u : {-g, g})
    for (double w : {-g, g}) s += f(0.5 * (x0 + x1) + 0.5 * (x1 - x0) * u, 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * w);
  return s * 0.25 * (x1 - x0) * (y1 - y0);
}

// Frozen from the closed-form rectangle spectrum: lambda_1(delta) = pi^2 (1 + 1/(1+delta)^2),
// gap to the unit square fitted over delta = 0.01, 0.02, 0.04, 0.08.
constexpr double frozen_rectangle_alpha = 0.952629;

}  // namespace

TEST(CrossMatrices, SameMeshReproducesOperators) {
  const auto m = mesh_of(shapes::l_shape(), 0.1);
  const auto c = cross_matrices(*m, *m);
  const Eigen::MatrixXd dK = Eigen::MatrixXd(c.K) - Eigen::MatrixXd(assemble_stiffness(*m).matrix());
  const Eigen::MatrixXd dM = Eigen::MatrixXd(c.M) - Eigen::MatrixXd(assemble_mass(*m).matrix());
  EXPECT_LE(dK.cwiseAbs().maxCoeff(), 1e-11);
  EXPECT_LE(dM.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(CrossMatricesProperty, PartitionOfUnityIdentities) {
  const auto a = mesh_of(shapes::unit_square(), 0.09);
  const auto b = mesh_of(shapes::rectangle(0.3, 0.2, 1.4, 1.1), 0.07);
  // The sampled rule decides membership in b per sub-triangle, so its area is only approximate.
  for (auto [method, tol] : {std::pair{CrossMethod::Overlay, 1e-12}, std::pair{CrossMethod::Sampled, 1e-3}}) {
    const auto c = cross_matrices(*a, *b, {method, 2});
    const Vector ones_a = Vector::Ones(a->n_vertices()), ones_b = Vector::Ones(b->n_vertices());
    EXPECT_NEAR(ones_a.dot(c.M * ones_b), 0.7 * 0.8, tol);
    EXPECT_LE((c.K * ones_b).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LE((c.K.transpose() * ones_a).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(CrossMatrices, LinearFunctionsMatchGaussOracle) {
  const auto a = mesh_of(shapes::unit_square(), 0.09);
  const auto b = mesh_of(shapes::rectangle(0.3, 0.2, 1.4, 1.1), 0.07);
  auto f = [](Point p) { return 1 + p.x - 2 * p.y; };
  auto g = [](Point p) { return 2 + 3 * p.x + p.y; };
  const Vector u = FEFunction::interpolate(a, f).values(), v = FEFunction::interpolate(b, g).values();
  const double mass = gauss_rect(0.3, 0.2, 1.0, 1.0, [&](double x, double y) { return f({x, y}) * g({x, y}); });
  const double stiff = (1 * 3 + -2 * 1) * 0.7 * 0.8;
  const auto c = cross_matrices(*a, *b);
  EXPECT_NEAR(u.dot(c.M * v), mass, 1e-12);
  EXPECT_NEAR(u.dot(c.K * v), stiff, 1e-12);
  const auto s = cross_matrices(*a, *b, {CrossMethod::Sampled, 3});
  EXPECT_NEAR(u.dot(s.M * v), mass, 1e-3 * mass);
  EXPECT_NEAR(u.dot(s.K * v), stiff, 1e-3 * stiff);
}

TEST(CrossMatrices, SampledConvergesToOverlay) {
  const auto a = mesh_of(shapes::l_shape(), 0.1);
  const auto b = mesh_of(shapes::regular_polygon({0.5, 0.45}, 0.5, 11), 0.08);
  const auto exact = cross_matrices(*a, *b);
  double prev = 1e300;
  for (int depth : {1, 2, 3}) {
    const auto s = cross_matrices(*a, *b, {CrossMethod::Sampled, depth});
    const double err = Eigen::MatrixXd(s.M - exact.M).cwiseAbs().sum();
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-3 * Eigen::MatrixXd(exact.M).cwiseAbs().sum());
  EXPECT_THROW(cross_matrices(*a, *b, {CrossMethod::Sampled, 9}), ValidationError);
}

TEST(AbstractBound, Examples) {
  EXPECT_DOUBLE_EQ(abstract_bound(10.0, 0.5, 0.25), 12.0);
  EXPECT_DOUBLE_EQ(abstract_bound(3.0, 0.0, 0.0), 3.0);
  EXPECT_THROW(abstract_bound(1.0, 0.1, 1.0), InfeasibleError);
  EXPECT_THROW(abstract_bound(1.0, -0.1, 0.5), ValidationError);
}

TEST(Projection, SameMeshIsIdentity) {
  const auto m = mesh_of(shapes::l_shape(), 0.08);
  for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
    const auto e = kind == BoundaryKind::Dirichlet ? solve_dirichlet(m, 4) : solve_neumann(m, 4);
    const auto rep = projection_constants(e, m);
    EXPECT_LE(rep.A_hat, 1e-10);
    EXPECT_LE(rep.B_hat, 1e-12);
    EXPECT_TRUE(rep.feasible);
    const Projector p(kind, m, m);
    const FEFunction pu = p.project(e.eigenvectors[2]);
    EXPECT_LE((pu.values() - e.eigenvectors[2].values()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Projection, DirichletRejectsNonvanishingInput) {
  const auto a = mesh_of(shapes::unit_square(), 0.1);
  const auto b = mesh_of(shapes::rectangle(0, 0, 1, 1.1), 0.1);
  const auto u = FEFunction::interpolate(b, [](Point) { return 1.0; });
  EXPECT_THROW(dirichlet_project(u, a), ValidationError);
}

TEST(ProjectionProperty, DirichletPythagoras) {
  // Galerkin orthogonality: |grad(Pu - u)|^2 = |grad u|^2 - |grad Pu|^2 = lambda_b - |grad Pu|^2.
  const auto a = mesh_of(shapes::unit_square(), 0.05);
  const auto b = mesh_of(shapes::rectangle(0, 0, 1, 1.05), 0.05);
  const auto eb = solve_dirichlet(b, 1);
  const auto rep = projection_constants(eb, a);
  const Projector p(BoundaryKind::Dirichlet, a, b);
  const Vector pu = p.project(eb.eigenvectors[0]).values();
  const double energy_pu = p.K_a().form(pu, pu);
  EXPECT_NEAR(rep.A_hat, eb.eigenvalues[0] - energy_pu, 1e-8 * eb.eigenvalues[0]);
  EXPECT_NEAR(rep.A_hat, rep.gram_H(0, 0), 1e-14);
}

TEST(ProjectionProperty, Idempotent) {
  const auto a = mesh_of(shapes::unit_square(), 0.06);
  const auto b = mesh_of(shapes::rectangle(0, 0, 1, 1.08), 0.05);
  const auto eb = solve_neumann(b, 3);
  const Projector ab(BoundaryKind::Neumann, a, b), aa(BoundaryKind::Neumann, a, a);
  const FEFunction once = ab.project(eb.eigenvectors[2]);
  const FEFunction twice = aa.project(once);
  EXPECT_LE((once.values() - twice.values()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ProjectionProperty, ConstantsShrinkWithPerturbation) {
  const auto a = mesh_of(shapes::unit_square(), 0.04);
  for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
    double prevA = 1e300, prevB = 1e300;
    for (double delta : {0.05, 0.025}) {
      const auto b = mesh_of(shapes::rectangle(0, 0, 1, 1 + delta), 0.04);
      const auto eb = kind == BoundaryKind::Dirichlet ? solve_dirichlet(b, 3) : solve_neumann(b, 3);
      const auto rep = projection_constants(eb, a);
      EXPECT_LT(rep.A_hat, prevA) << to_string(kind) << " " << delta;
      EXPECT_LT(rep.B_hat, prevB) << to_string(kind) << " " << delta;
      prevA = rep.A_hat;
      prevB = rep.B_hat;
    }
  }
}

TEST(ProjectionProperty, RotationInvariant) {
  const auto a = mesh_of(shapes::unit_square(), 0.07);
  const auto b = mesh_of(shapes::rectangle(0.02, 0, 1.02, 1.3), 0.07);
  const double t = 0.7;
  const auto ra = rotated(*a, t), rb = rotated(*b, t);
  for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
    auto solve = [&](auto m) { return kind == BoundaryKind::Dirichlet ? solve_dirichlet(m, 3) : solve_neumann(m, 3); };
    const auto r0 = projection_constants(solve(b), a);
    const auto r1 = projection_constants(solve(rb), ra);
    EXPECT_NEAR(r0.A_hat, r1.A_hat, 1e-8 * std::max(1.0, r0.A_hat)) << to_string(kind);
    EXPECT_NEAR(r0.B_hat, r1.B_hat, 1e-8) << to_string(kind);
  }
}

TEST(ProjectionProperty, DirichletBoundHoldsBothWays) {
  const auto a = mesh_of(shapes::unit_square(), 0.05);
  const auto b = mesh_of(shapes::unit_square().translated({0.04, 0.0}), 0.05);
  const auto ea = solve_dirichlet(a, 5), eb = solve_dirichlet(b, 5);
  auto fwd = projection_constants(eb, a);
  auto bwd = projection_constants(ea, b);
  attach_true_spectrum(fwd, ea);
  attach_true_spectrum(bwd, eb);
  ASSERT_TRUE(fwd.feasible && bwd.feasible);
  EXPECT_TRUE(bound_violations(fwd).empty());
  EXPECT_TRUE(bound_violations(bwd).empty());
  for (int k = 0; k < 5; ++k) {
    EXPECT_LE(fwd.lambda_a[k], fwd.minmax_bound[k] * (1 + 1e-9));
    EXPECT_NEAR(fwd.true_gap[k], ea.eigenvalues[k] - eb.eigenvalues[k], 1e-12);
  }
}

TEST(ProjectionProperty, MinMaxBoundHoldsForNeumann) {
  const auto a = mesh_of(shapes::unit_square(), 0.04);
  const auto b = mesh_of(shapes::rectangle(0, 0, 1, 1.02), 0.04);
  auto rep = projection_constants(solve_neumann(b, 5), a);
  attach_true_spectrum(rep, solve_neumann(a, 5));
  for (int k = 0; k < 5; ++k) EXPECT_LE(rep.lambda_a[k], rep.minmax_bound[k] + 1e-9 * rep.lambda_a[k]) << k;
}

TEST(Projection, RejectsMismatchedInputs) {
  const auto a = mesh_of(shapes::unit_square(), 0.2);
  const auto e = solve_neumann(a, 2);
  EXPECT_THROW(projection_constants_dirichlet(e, a), ValidationError);
  auto rep = projection_constants(e, a);
  EXPECT_THROW(attach_true_spectrum(rep, solve_neumann(a, 1)), ValidationError);
}

TEST(Transfer, PreservesConstants) {
  const auto db = shapes::unit_square();
  const auto mb = mesh_of(db, 0.04);
  const double delta = 0.025;
  const auto da = shapes::rectangle(0, 0, 1, 1 + delta);
  const auto ma = mesh_of(da, 0.04);
  const auto cov = build_covering(db, 2.5 * delta);
  const FEFunction c(mb, Vector::Constant(mb->n_vertices(), 3.0));
  const auto t = neumann_transfer_detailed(c, da, db, cov, delta, ma);
  EXPECT_EQ(t.disks.size(), cov.centers.size());
  EXPECT_LE((t.u.values().array() - 3.0).abs().maxCoeff(), 1e-12);
  for (const auto& d : t.disks) EXPECT_GT(db.signed_distance(d.Y), 0.0);
}

TEST(Transfer, EmptyCoveringGivesMaskedFunction) {
  const auto db = shapes::unit_square();
  const auto mb = mesh_of(db, 0.1);
  const auto ma = mesh_of(shapes::unit_square(), 0.1);
  const auto u = FEFunction::interpolate(mb, [](Point p) { return p.x + p.y; });
  const auto t = neumann_transfer(u, shapes::unit_square(), db, Covering{}, 0.05, ma);
  for (int v = 0; v < ma->n_vertices(); ++v) {
    const Point p = ma->vertices()[v];
    EXPECT_NEAR(t.values()[v], p.x + p.y, 1e-12);
  }
}

TEST(Transfer, RejectsInvalidDelta) {
  const auto db = shapes::unit_square();
  const auto mb = mesh_of(db, 0.2);
  const FEFunction u(mb, Vector::Ones(mb->n_vertices()));
  const auto cov = build_covering(db, 0.25);
  EXPECT_THROW(neumann_transfer(u, db, db, cov, 0.0, mb), ValidationError);
  EXPECT_THROW(neumann_transfer(u, db, db, cov, 0.05, mb), ValidationError);
  EXPECT_THROW(neumann_transfer(u, db, db, build_covering(db, 2.5), 1.0, mb), ValidationError);
}

TEST(TransferProperty, DistanceShrinksWithDelta) {
  const auto db = shapes::unit_square();
  const auto mb = mesh_of(db, 0.03);
  const auto eb = solve_neumann(mb, 2);
  double prev = 1e300;
  for (double delta : {0.05, 0.025}) {
    const auto da = shapes::rectangle(0, 0, 1, 1 + delta);
    const auto ma = mesh_of(da, 0.03);
    const auto t = neumann_transfer(eb.eigenvectors[1], da, db, build_covering(db, 2.5 * delta), delta, ma);
    const double d = combined_distance(t, eb.eigenvectors[1], cross_matrices(*ma, *mb));
    EXPECT_LT(d, prev) << delta;
    prev = d;
  }
}

namespace {

std::vector<StabilityRecord> synthetic(double alpha, double C) {
  std::vector<StabilityRecord> out;
  for (double d : {0.01, 0.02, 0.04, 0.08}) {
    StabilityRecord r;
    r.delta = r.delta_complement = d;
    r.delta_sets = 2 * d;
    r.gaps = {C * std::pow(d, alpha)};
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST(FitExponent, ExactPowerLaw) {
  const auto f = fit_exponent(synthetic(1.0, 3.0), 1, DeltaKind::Complement);
  EXPECT_NEAR(f.alpha, 1.0, 1e-12);
  EXPECT_NEAR(f.C, 3.0, 1e-10);
  EXPECT_LT(f.residual, 1e-12);
  EXPECT_EQ(f.used, 4);
  EXPECT_NEAR(fit_exponent(synthetic(0.5, 1.0), 1, DeltaKind::Complement).alpha, 0.5, 1e-12);
  // Sets distance is twice the complement one: same slope, smaller constant.
  const auto s = fit_exponent(synthetic(0.5, 1.0), 1, DeltaKind::Sets);
  EXPECT_NEAR(s.alpha, 0.5, 1e-12);
  EXPECT_NEAR(s.C, 1.0 / std::sqrt(2.0), 1e-10);
}

TEST(FitExponent, ClosedFormRectangle) {
  std::vector<StabilityRecord> recs;
  for (double d : {0.01, 0.02, 0.04, 0.08}) {
    StabilityRecord r;
    r.delta_complement = d;
    r.gaps = {pi * pi * (1.0 - 1.0 / ((1 + d) * (1 + d)))};
    recs.push_back(r);
  }
  EXPECT_NEAR(fit_exponent(recs, 1, DeltaKind::Complement).alpha, frozen_rectangle_alpha, 1e-5);
}

TEST(FitExponent, SkipsZerosAndRejectsTooFew) {
  auto recs = synthetic(1.0, 1.0);
  recs[0].gaps[0] = 0.0;
  EXPECT_EQ(fit_exponent(recs, 1, DeltaKind::Complement).used, 3);
  recs[1].gaps[0] = 1e-12;
  EXPECT_THROW(fit_exponent(recs, 1, DeltaKind::Complement), ValidationError);
  EXPECT_THROW(fit_exponent(synthetic(1.0, 1.0), 2, DeltaKind::Complement), ValidationError);
  EXPECT_THROW(fit_exponent(synthetic(1.0, 1.0), 0, DeltaKind::Complement), ValidationError);
}

TEST(Family, SingleDeltaRecord) {
  const DomainFamily fam = [](double d) {
    return DomainPair{shapes::unit_square(), shapes::rectangle(0, 0, 1, 1 + d)};
  };
  int calls = 0;
  FamilyOptions opts;
  opts.on_record = [&](const StabilityRecord&, const std::vector<ProjectionReport>& reps) {
    ++calls;
    EXPECT_EQ(reps.size(), 2u);
  };
  const auto res = run_stability_family(fam, {0.05}, 3, BoundaryKind::Dirichlet, 0.05, opts);
  ASSERT_EQ(res.records.size(), 1u);
  EXPECT_EQ(calls, 1);
  const auto& r = res.records[0];
  EXPECT_NEAR(r.delta_complement, 0.05, 2e-3);
  EXPECT_NEAR(r.delta_sets, 0.05, 2e-3);
  EXPECT_NEAR(r.perimeter, 4.1, 1e-12);
  EXPECT_EQ(r.gaps.size(), 3u);
  EXPECT_TRUE(res.fits.empty());
  EXPECT_DOUBLE_EQ(res.feasibility_frontier, 0.05);
  EXPECT_EQ(r.mu_star, std::max(r.lambda_a[2], r.lambda_b[2]));
}

TEST(Family, RejectsBadArguments) {
  const DomainFamily fam = [](double) { return DomainPair{shapes::unit_square(), shapes::unit_square()}; };
  EXPECT_THROW(run_stability_family(fam, {0.02, 0.01}, 2, BoundaryKind::Dirichlet, 0.1), ValidationError);
  EXPECT_THROW(run_stability_family(fam, {0.01}, 0, BoundaryKind::Dirichlet, 0.1), ValidationError);
  EXPECT_THROW(run_stability_family(fam, {0.01}, 2, BoundaryKind::Dirichlet, 0.0), ValidationError);
  EXPECT_THROW(run_stability_family(nullptr, {0.01}, 2, BoundaryKind::Dirichlet, 0.1), ValidationError);
}

TEST(Family, CsvLayout) {
  auto recs = synthetic(1.0, 1.0);
  for (auto& r : recs) r.bound = {7.0};
  std::ostringstream os;
  write_records_csv(os, recs);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "delta_complement,delta_sets,gap_1,A_hat,B_hat,bound_1");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4);
  recs[2].gaps.push_back(1.0);
  std::ostringstream bad;
  EXPECT_THROW(write_records_csv(bad, recs), ValidationError);
}
