// Acceptance checks. Usage: acceptance [k ...]; with no arguments every check runs.
// Prints one PASS/FAIL line per check and exits nonzero if any selected check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fem_oracles.hpp"
#include "specstab/decay/decay.hpp"
#include "specstab/geometry/covering.hpp"
#include "specstab/geometry/flatness.hpp"
#include "specstab/geometry/shapes.hpp"
#include "specstab/lab/scenarios.hpp"
#include "specstab/meshing/triangulate.hpp"
#include "specstab/stability/family.hpp"

using namespace specstab;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "  violated: " << what << '\n';
    }
  }
};

std::shared_ptr<const TriMesh> mesh_of(const PolygonalDomain& d, double h) {
  return std::make_shared<const TriMesh>(triangulate(d, h));
}

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> r;
  for (int i = 0; i < n; ++i) r.push_back(lo * std::pow(hi / lo, i / double(n - 1)));
  return r;
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Rectangle family: spectra, measured complement distance, fitted rate, runtime.
void rectangle_stability(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> deltas{0.01, 0.02, 0.04, 0.08};
  const auto res = run_stability_family(lab::scenario_family(lab::RunConfig{}), deltas, 5, BoundaryKind::Dirichlet,
                                        0.02);
  const double elapsed = seconds_since(t0);
  const auto square = oracle::rectangle_spectrum(1, 1, 5, false);
  for (const auto& r : res.records) {
    const auto rect = oracle::rectangle_spectrum(1, 1 + r.delta, 5, false);
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      worst = std::max(worst, std::abs(r.lambda_a[k] - square[k]) / square[k]);
      worst = std::max(worst, std::abs(r.lambda_b[k] - rect[k]) / rect[k]);
    }
    o.detail << "  delta " << r.delta << ": spectrum rel err " << num(worst) << ", d_H(complements) "
             << num(r.delta_complement) << '\n';
    o.require(worst <= 0.01, "spectrum within 1% at delta " + num(r.delta));
    o.require(std::abs(r.delta_complement - r.delta) <= 2e-3, "complement distance within 2e-3 at delta " + num(r.delta));
  }
  const double alpha = res.fits.empty() ? std::nan("") : res.fits[0].alpha;
  o.detail << "  alpha_1 " << num(alpha) << ", runtime " << num(elapsed) << " s\n";
  o.require(alpha >= 0.9 && alpha <= 1.05, "alpha_1 in [0.9, 1.05]");
  o.require(elapsed < 60.0, "runtime below 60 s");
}

// 2. Comparison bound over the scenario library, both boundary conditions, k <= 5.
void library_bound(Outcome& o) {
  for (const char* name : {"rectangle_family", "shifted_square", "sawtooth_lipschitz", "reifenberg_wiggle"})
    for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
      lab::RunConfig c;
      c.scenario = name;
      c.kind = kind;
      const auto res = run_stability_family(lab::scenario_family(c), c.deltas, 5, kind, 0.02);
      int feasible = 0, violations = 0, minmax_violations = 0;
      std::ostringstream where;
      for (size_t i = 0; i < res.reports.size(); ++i) {
        const auto& rep = res.reports[i];
        if (!rep.feasible) continue;
        ++feasible;
        for (int k : bound_violations(rep)) {
          ++violations;
          const double delta = c.deltas[i / 2];
          where << " (delta " << delta << (i % 2 ? " swapped" : "") << ", k " << k << ": " << num(rep.lambda_a[k - 1])
                << " > " << num(rep.abstract_bound[k - 1]) << ")";
        }
        for (int k = 0; k < rep.n; ++k)
          if (rep.lambda_a[k] > rep.minmax_bound[k] * (1 + 1e-6) + rep.quadrature_budget[k]) ++minmax_violations;
      }
      o.detail << "  " << name << " " << to_string(kind) << ": " << feasible << " feasible pairs, " << violations
               << " bound violations" << where.str() << "; min-max bound violations " << minmax_violations << '\n';
      o.require(violations == 0, std::string(name) + " " + to_string(kind) + " has bound violations");
    }
}

std::shared_ptr<const TriMesh> sector_mesh(double omega) { return mesh_of(shapes::sector(omega, 1.0, 0.02), 0.02); }

const std::vector<double> kSectorRadii = geometric(0.1, 0.75, 8);

// 3. Sector energies against the closed form and the fitted decay exponent.
void sector_decay(Outcome& o) {
  for (double w : {pi / 2, pi, 3 * pi / 2}) {
    const auto u = FEFunction::interpolate(sector_mesh(w), SectorHarmonic(w));
    for (double r : {0.25, 0.5, 0.75}) {
      const double e = region_energy(u, {0, 0}, r), exact = sector_energy_oracle(w, r);
      const double rel = std::abs(e - exact) / exact;
      o.detail << "  omega " << num(w) << " r " << r << ": energy " << num(e) << " vs " << num(exact) << " (rel "
               << num(rel) << ")\n";
      o.require(rel <= 0.05, "energy within 5% at omega " + num(w) + ", r " + num(r));
    }
    const auto p = measure_decay(u, {0, 0}, kSectorRadii);
    const double target = 2 * pi / w, rel = std::abs(p.fitted_exponent - target) / target;
    o.detail << "  omega " << num(w) << ": exponent " << num(p.fitted_exponent) << " vs " << num(target) << '\n';
    o.require(rel <= 0.1, "exponent within 10% at omega " + num(w));
  }
}

// 4. Sign test of the monotonicity functional with C0 = 0.
void monotonicity(Outcome& o) {
  for (double w : {pi / 2, pi, 3 * pi / 2}) {
    const auto u = FEFunction::interpolate(sector_mesh(w), SectorHarmonic(w));
    for (double beta : {0.5, 1.0, 1.5}) {
      const bool nondecreasing = is_nondecreasing(monotonicity_profile(u, {0, 0}, beta, 0.0, kSectorRadii), 1e-8);
      const bool expected = beta <= 2 * pi / w;
      o.detail << "  omega " << num(w) << " beta " << beta << ": nondecreasing " << nondecreasing << ", expected "
               << expected << '\n';
      o.require(nondecreasing == expected, "sign test at omega " + num(w) + ", beta " + num(beta));
    }
  }
}

// 5. Sup-norm bound on the first ten unit-square Dirichlet eigenfunctions.
void linf_bound(Outcome& o) {
  const auto e = solve_dirichlet(mesh_of(shapes::unit_square(), 0.02), 10);
  const auto M = assemble_mass(*e.mesh);
  for (int k = 0; k < 10; ++k) {
    const double l2 = l2_norm(e.eigenvectors[k], M);
    const double sup = sup_norm(e.eigenvectors[k]) / l2;
    const double bound = std::sqrt(e.eigenvalues[k] * std::numbers::e / (4 * pi));
    o.detail << "  k " << k + 1 << ": sup " << num(sup) << ", bound " << num(bound) << '\n';
    o.require(sup <= 1.05 * bound, "sup bound at k " + std::to_string(k + 1));
  }
  o.detail << "  bound at 2 pi^2: " << num(dirichlet_linf_bound(2 * pi * pi)) << '\n';
}

// 6. Covering and partition of unity, verified by brute force.
void covering_suite(Outcome& o) {
  const std::vector<PolygonalDomain> domains{shapes::unit_square(), shapes::l_shape(),
                                             shapes::sawtooth_rectangle(1, 1, 4, 0.3), shapes::wiggle_square(0.1, 3),
                                             shapes::regular_polygon({0, 0}, 0.5, 40)};
  std::mt19937_64 rng(20240611);
  for (const auto& d : domains)
    for (double r : {0.1, 0.05}) {
      const Covering cov = build_covering(d, r);
      const auto& x = cov.centers;
      double min_sep = 1e300;
      for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = i + 1; j < x.size(); ++j) min_sep = std::min(min_sep, distance(x[i], x[j]));
      auto nearest = [&](Point p) {
        double m = 1e300;
        for (Point c : x) m = std::min(m, distance(p, c));
        return m;
      };
      double worst_cover = 0.0;
      std::uniform_real_distribution<double> s(0.0, d.perimeter());
      for (int i = 0; i < 10000; ++i) worst_cover = std::max(worst_cover, nearest(d.boundary_point(s(rng))));
      const auto& bb = d.bbox();
      std::uniform_real_distribution<double> ux(bb.lo.x - 2 * r, bb.hi.x + 2 * r), uy(bb.lo.y - 2 * r, bb.hi.y + 2 * r);
      double worst_sum = 0.0;
      int support_bad = 0;
      for (int i = 0; i < 10000; ++i) {
        const Point p(ux(rng), uy(rng));
        const auto th = partition_of_unity(cov, p);
        double sum = 0.0;
        for (double t : th) sum += t;
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        const double dn = nearest(p);
        if (dn < r && th[0] != 0.0) ++support_bad;
        if (dn >= 2 * r && th[0] != 1.0) ++support_bad;
        for (size_t k = 0; k < x.size(); ++k)
          if (distance(p, x[k]) >= 2 * r && th[k + 1] != 0.0) ++support_bad;
      }
      const double count_cap = 10.0 * d.perimeter() / r;
      o.detail << "  " << d.name() << " r " << r << ": " << cov.count << " centers (cap " << num(count_cap)
               << "), min separation " << num(min_sep / r) << " r, coverage " << num(worst_cover / r)
               << " r, |sum - 1| " << num(worst_sum) << ", support errors " << support_bad << '\n';
      const std::string tag = d.name() + " r " + num(r);
      o.require(x.size() < 2 || min_sep >= r / 5, tag + ": balls B(x_i, r/10) disjoint");
      o.require(worst_cover <= r / 5, tag + ": boundary within r/5 of a center");
      o.require(cov.count <= count_cap, tag + ": count <= 10 L / r");
      o.require(worst_sum <= 1e-12, tag + ": partition sums to one");
      o.require(support_bad == 0, tag + ": support conditions");
    }
}

double orthonormality_defect(const EigenSet& e) {
  const auto M = assemble_mass(*e.mesh);
  double worst = 0.0;
  for (size_t i = 0; i < e.eigenvectors.size(); ++i)
    for (size_t j = 0; j < e.eigenvectors.size(); ++j)
      worst = std::max(worst, std::abs(M.form(e.eigenvectors[i].values(), e.eigenvectors[j].values()) - (i == j)));
  return worst;
}

// 7. Residuals, orthonormality and the Neumann zero mode on every library mesh.
void solver_floor(Outcome& o) {
  const std::vector<PolygonalDomain> domains{shapes::unit_square(),
                                             shapes::l_shape(),
                                             shapes::rectangle(0, 0, 1, 1.08),
                                             shapes::sawtooth_rectangle(1, 1, 4, 0.32),
                                             shapes::wiggle_square(0.16, 20240611),
                                             shapes::sector(3 * pi / 2, 1.0, 0.02),
                                             shapes::regular_polygon({0, 0}, 0.5, 64)};
  for (const auto& d : domains) {
    const bool is_square = &d == &domains.front();
    const auto m = mesh_of(d, 0.02);
    for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
      const auto e = kind == BoundaryKind::Dirichlet ? solve_dirichlet(m, 5) : solve_neumann(m, 5);
      const double res = *std::max_element(e.residuals.begin(), e.residuals.end());
      const double orth = orthonormality_defect(e);
      o.detail << "  " << d.name() << " " << to_string(kind) << ": residual " << num(res) << ", orthonormality "
               << num(orth);
      o.require(res <= 1e-8, d.name() + " " + to_string(kind) + " residual");
      o.require(orth <= 1e-10, d.name() + " " + to_string(kind) + " orthonormality");
      if (kind == BoundaryKind::Neumann) {
        o.detail << ", mu_1 " << num(e.eigenvalues[0]);
        o.require(e.eigenvalues[0] <= 1e-8, d.name() + " Neumann mu_1");
        if (is_square) {
          o.detail << ", mu_2 " << num(e.eigenvalues[1]);
          o.require(std::abs(e.eigenvalues[1] - pi * pi) <= 0.01 * pi * pi, "square Neumann mu_2 within 1%");
        }
      }
      o.detail << '\n';
    }
  }
}

// 8. Scaling a fixed mesh by 2 divides every eigenvalue by 4.
void scaling_law(Outcome& o) {
  for (const auto& d : {shapes::l_shape(), shapes::wiggle_square(0.16, 20240611)}) {
    const auto m = mesh_of(d, 0.02);
    const auto s = std::make_shared<const TriMesh>(m->scaled(2.0));
    for (auto kind : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
      auto solve = [&](auto mesh) { return kind == BoundaryKind::Dirichlet ? solve_dirichlet(mesh, 5) : solve_neumann(mesh, 5); };
      const auto a = solve(m), b = solve(s);
      double worst = 0.0;
      for (int k = 0; k < 5; ++k) {
        // The Neumann zero mode has no relative scale; measure it against lambda_2.
        const double scale = a.eigenvalues[k] > 1e-8 ? a.eigenvalues[k] : a.eigenvalues[1];
        worst = std::max(worst, std::abs(4.0 * b.eigenvalues[k] - a.eigenvalues[k]) / scale);
      }
      o.detail << "  " << d.name() << " " << to_string(kind) << ": max relative deviation " << num(worst) << '\n';
      o.require(worst <= 1e-10, d.name() + " " + to_string(kind) + " scaling");
    }
  }
}

// 9. Flatness estimator on a straight edge and at a right-angle corner.
void flatness(Outcome& o) {
  const auto square = shapes::unit_square();
  FlatnessOptions opts;
  for (int i = 0; i <= 20; ++i) opts.sample_points.push_back({0.3 + 0.02 * i, 0.0});
  const auto straight = estimate_reifenberg_flatness(square, 0.2, opts);
  const double corner = best_line(square, {0, 0}, 0.2, 64).deviation;
  o.detail << "  straight edge epsilon_hat " << num(straight.epsilon_hat) << ", corner " << num(corner)
           << " (sin(pi/4) = " << num(std::sin(pi / 4)) << ")\n";
  o.require(straight.epsilon_hat <= 0.01, "straight edge <= 0.01");
  o.require(corner >= 0.65 && corner <= 0.75, "corner in [0.65, 0.75]");
}

struct Criterion {
  const char* title;
  std::function<void(Outcome&)> run;
};

const std::vector<Criterion> kCriteria{
    {"rectangle family stability rate", rectangle_stability},
    {"comparison bound over the scenario library", library_bound},
    {"sector energy and decay exponent", sector_decay},
    {"monotonicity sign test", monotonicity},
    {"eigenfunction sup-norm bound", linf_bound},
    {"covering and partition of unity", covering_suite},
    {"eigensolver accuracy floor", solver_floor},
    {"eigenvalue scaling law", scaling_law},
    {"flatness estimator sanity", flatness},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(kCriteria.size())) {
      std::cerr << "acceptance: unknown criterion '" << argv[i] << "'\n";
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(kCriteria.size()); ++k) selected.push_back(k);

  int failed = 0;
  for (int k : selected) {
    const auto& c = kCriteria[static_cast<size_t>(k - 1)];
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "  exception: " << e.what() << '\n';
    }
    std::cout << o.detail.str();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << c.title << " (" << num(seconds_since(t0))
              << " s)" << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
