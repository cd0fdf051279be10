#include "specstab/stability/family.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "specstab/error.hpp"
#include "specstab/geometry/hausdorff.hpp"

namespace specstab {

FitResult fit_exponent(const std::vector<StabilityRecord>& records, int k, DeltaKind which) {
  if (k < 1) throw ValidationError("fit_exponent: k must be at least 1");
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    if (static_cast<int>(r.gaps.size()) < k) throw ValidationError("fit_exponent: record has fewer than k gaps");
    double d = r.delta_complement;
    if (which == DeltaKind::Sets) d = r.delta_sets;
    if (which == DeltaKind::Max) d = std::max(r.delta_complement, r.delta_sets);
    const double g = r.gaps[static_cast<size_t>(k - 1)];
    if (!(d > 1e-10) || !(g > 1e-10)) continue;
    xs.push_back(std::log(d));
    ys.push_back(std::log(g));
  }
  const auto m = static_cast<double>(xs.size());
  if (xs.size() < 3) throw ValidationError("fit_exponent: fewer than 3 usable records");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / m;
    my += ys[i] / m;
  }
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("fit_exponent: deltas are not distinct");
  FitResult f;
  f.alpha = sxy / sxx;
  const double icpt = my - f.alpha * mx;
  f.C = std::exp(icpt);
  double ss = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (icpt + f.alpha * xs[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / m);
  f.used = static_cast<int>(xs.size());
  return f;
}

namespace {

std::string domain_key(const PolygonalDomain& d) {
  std::ostringstream os;
  os.precision(17);
  for (const Ring* ring : d.rings()) {
    for (Point p : *ring) os << p.x << ',' << p.y << ';';
    os << '|';
  }
  return os.str();
}

template <class E>
[[noreturn]] void retag(const E& e, double delta) {
  std::ostringstream os;
  os << "delta = " << delta << ": " << e.what();
  throw E(os.str());
}

}  // namespace

FamilyResult run_stability_family(const DomainFamily& family, const std::vector<double>& deltas, int n,
                                  BoundaryKind kind, double h, const FamilyOptions& opts) {
  if (!family) throw ValidationError("run_stability_family: empty family");
  if (n < 1) throw ValidationError("run_stability_family: n must be at least 1");
  if (!(h > 0.0)) throw ValidationError("run_stability_family: h must be positive");
  for (size_t i = 0; i < deltas.size(); ++i)
    if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] > deltas[i - 1])))
      throw ValidationError("run_stability_family: deltas must be positive and strictly increasing");

  struct Solved {
    std::shared_ptr<const TriMesh> mesh;
    EigenSet eigs;
  };
  std::map<std::string, Solved> cache;
  auto solve = [&](const PolygonalDomain& d) -> const Solved& {
    const std::string key = domain_key(d);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto mesh = std::make_shared<const TriMesh>(triangulate(d, h, opts.mesh));
    EigenSet e = kind == BoundaryKind::Dirichlet ? solve_dirichlet(mesh, n, opts.eig) : solve_neumann(mesh, n, opts.eig);
    return cache.emplace(key, Solved{mesh, std::move(e)}).first->second;
  };

  FamilyResult out;
  for (double delta : deltas) {
    try {
      const DomainPair pair = family(delta);
      const Solved& sa = solve(pair.a);
      const Solved& sb = solve(pair.b);
      StabilityRecord rec;
      rec.delta = delta;
      rec.delta_complement = hausdorff_distance_complements(pair.a, pair.b, opts.hausdorff_resolution);
      rec.delta_sets = hausdorff_distance_sets(pair.a, pair.b, opts.hausdorff_resolution);
      rec.perimeter = pair.b.perimeter();
      rec.lambda_a = sa.eigs.eigenvalues;
      rec.lambda_b = sb.eigs.eigenvalues;
      for (int k = 0; k < n; ++k)
        rec.gaps.push_back(std::abs(rec.lambda_a[static_cast<size_t>(k)] - rec.lambda_b[static_cast<size_t>(k)]));
      rec.mu_star = std::max(rec.lambda_a.back(), rec.lambda_b.back());

      const size_t first = out.reports.size();
      ProjectionReport fwd = projection_constants(sb.eigs, sa.mesh, opts.cross);
      attach_true_spectrum(fwd, sa.eigs);
      rec.A_hat = fwd.A_hat;
      rec.B_hat = fwd.B_hat;
      rec.bound = fwd.abstract_bound;
      if (fwd.feasible) out.feasibility_frontier = std::max(out.feasibility_frontier, delta);
      out.reports.push_back(std::move(fwd));
      if (opts.both_orientations) {
        ProjectionReport bwd = projection_constants(sa.eigs, sb.mesh, opts.cross);
        attach_true_spectrum(bwd, sb.eigs);
        out.reports.push_back(std::move(bwd));
      }
      if (opts.on_record)
        opts.on_record(rec, std::vector<ProjectionReport>(out.reports.begin() + static_cast<std::ptrdiff_t>(first),
                                                          out.reports.end()));
      out.records.push_back(std::move(rec));
    } catch (const InfeasibleError& e) {
      retag(e, delta);
    } catch (const NumericalError& e) {
      retag(e, delta);
    } catch (const ValidationError& e) {
      retag(e, delta);
    }
  }

  if (out.records.size() >= 3) {
    const DeltaKind which = kind == BoundaryKind::Dirichlet ? DeltaKind::Complement : DeltaKind::Max;
    for (int k = 1; k <= n; ++k) {
      try {
        out.fits.push_back(fit_exponent(out.records, k, which));
      } catch (const ValidationError&) {
        out.fits.push_back(FitResult{std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, 0});
      }
    }
    for (auto& r : out.records) {
      r.alpha = out.fits.front().alpha;
      r.fit_residual = out.fits.front().residual;
    }
  }
  return out;
}

void write_records_csv(std::ostream& os, const std::vector<StabilityRecord>& records) {
  const size_t n = records.empty() ? 0 : records.front().gaps.size();
  os << "delta_complement,delta_sets";
  for (size_t k = 1; k <= n; ++k) os << ",gap_" << k;
  os << ",A_hat,B_hat";
  for (size_t k = 1; k <= n; ++k) os << ",bound_" << k;
  os << '\n';
  const auto old = os.precision(12);
  for (const auto& r : records) {
    if (r.gaps.size() != n || r.bound.size() != n) throw ValidationError("write_records_csv: ragged records");
    os << r.delta_complement << ',' << r.delta_sets;
    for (double g : r.gaps) os << ',' << g;
    os << ',' << r.A_hat << ',' << r.B_hat;
    for (double b : r.bound) os << ',' << (std::isfinite(b) ? b : std::numeric_limits<double>::infinity());
    os << '\n';
  }
  os.precision(old);
}

}  // namespace specstab
