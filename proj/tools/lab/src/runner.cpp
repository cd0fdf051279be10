#include "specstab/lab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "specstab/decay/decay.hpp"
#include "specstab/geometry/covering.hpp"
#include "specstab/geometry/flatness.hpp"
#include "specstab/geometry/shapes.hpp"
#include "specstab/io/json_io.hpp"
#include "specstab/lab/scenarios.hpp"
#include "specstab/meshing/triangulate.hpp"

namespace specstab::lab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary | std::ios::trunc);
    f << content;
    if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_manifest(Artifacts& art, const RunConfig& c, const RunOutcome& o) {
  std::ostringstream os;
  os << "tool: stability_lab\n";
  os << "scenario: " << c.scenario << '\n';
  os << "kind: " << to_string(c.kind) << '\n';
  os << "status: " << (o.exit_code == kOk ? "ok" : "failed") << '\n';
  os << "exit_code: " << o.exit_code << '\n';
  if (!o.message.empty()) os << "failure: " << o.message << '\n';
  os << "timestamp: " << timestamp() << '\n';
  os << "files:";
  for (const auto& f : art.files())
    if (f != "MANIFEST") os << ' ' << f;
  os << '\n';
  art.write("MANIFEST", os.str());
}

json checks_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (const auto& ch : checks) a.push_back({{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
  return a;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

/// First n eigenvalues of (0,1) x (0,L), Dirichlet (p, q >= 1) or Neumann (p, q >= 0).
std::vector<double> rectangle_spectrum(double L, int n, BoundaryKind kind) {
  const int lo = kind == BoundaryKind::Dirichlet ? 1 : 0;
  std::vector<double> v;
  for (int p = lo; p <= n + 2; ++p)
    for (int q = lo; q <= n + 2; ++q) v.push_back(std::numbers::pi * std::numbers::pi * (p * p + q * q / (L * L)));
  std::sort(v.begin(), v.end());
  v.resize(static_cast<size_t>(n));
  return v;
}

json report_json(const ProjectionReport& r) {
  const auto viol = bound_violations(r);
  return {{"A_hat", r.A_hat},
          {"B_hat", r.B_hat},
          {"feasible", r.feasible},
          {"lambda_a", nums(r.lambda_a)},
          {"lambda_b", nums(r.lambda_b)},
          {"abstract_bound", nums(r.abstract_bound)},
          {"minmax_bound", nums(r.minmax_bound)},
          {"quadrature_budget", nums(r.quadrature_budget)},
          {"violations", viol}};
}

void finish(Artifacts& art, const RunConfig& c, RunOutcome& o, json& report, std::ostream& log) {
  if (o.exit_code == kOk)
    for (const auto& ch : o.checks)
      if (!ch.passed) {
        o.exit_code = kAssertionFailure;
        if (o.message.empty()) o.message = "check failed: " + ch.name + " (" + ch.detail + ")";
      }
  report["checks"] = checks_json(o.checks);
  report["status"] = o.exit_code == kOk ? "ok" : "failed";
  report["exit_code"] = o.exit_code;
  if (!o.message.empty()) report["failure"] = o.message;
  art.write("report.json", report.dump(2) + "\n");
  write_manifest(art, c, o);
  o.files = art.files();
  for (const auto& ch : o.checks) log << (ch.passed ? "  pass  " : "  FAIL  ") << ch.name << ": " << ch.detail << '\n';
  log << "exit " << o.exit_code << (o.message.empty() ? "" : ": " + o.message) << '\n';
}

void run_family(const RunConfig& c, Artifacts& art, RunOutcome& o, json& report, std::ostream& log) {
  const DomainFamily family = scenario_family(c);
  FamilyOptions fo;
  fo.eig.seed = c.seed;
  std::vector<StabilityRecord> records;
  json per_delta = json::array();
  std::vector<ProjectionReport> all_reports;
  fo.on_record = [&](const StabilityRecord& rec, const std::vector<ProjectionReport>& reps) {
    records.push_back(rec);
    std::ostringstream csv;
    write_records_csv(csv, records);
    art.write("records.csv", csv.str());
    json d = {{"delta", rec.delta},
              {"delta_complement", rec.delta_complement},
              {"delta_sets", rec.delta_sets},
              {"perimeter", rec.perimeter},
              {"mu_star", rec.mu_star},
              {"gaps", nums(rec.gaps)},
              {"forward", report_json(reps.at(0))}};
    if (reps.size() > 1) d["swapped"] = report_json(reps[1]);
    per_delta.push_back(std::move(d));
    all_reports.insert(all_reports.end(), reps.begin(), reps.end());
    log << "  delta " << rec.delta << ": d_H(c) " << fmt(rec.delta_complement) << " gap_1 " << fmt(rec.gaps.front())
        << " A " << fmt(rec.A_hat) << " B " << fmt(rec.B_hat) << '\n';
  };

  FamilyResult res;
  try {
    res = run_stability_family(family, c.deltas, c.n, c.kind, c.h, fo);
  } catch (const Error& e) {
    o.exit_code = kNumericalFailure;
    o.message = e.what();
    report["records"] = per_delta;
    return;
  }
  report["records"] = per_delta;
  report["feasibility_frontier"] = res.feasibility_frontier;

  // Exponent fits and plot data.
  const DeltaKind which = c.kind == BoundaryKind::Dirichlet ? DeltaKind::Complement : DeltaKind::Max;
  report["delta_measure"] = c.kind == BoundaryKind::Dirichlet ? "complement" : "max(complement, sets)";
  json fits = json::object();
  for (size_t k = 0; k < res.fits.size(); ++k) {
    const auto& f = res.fits[k];
    fits["alpha_" + std::to_string(k + 1)] = {
        {"alpha", num(f.alpha)}, {"C", num(f.C)}, {"residual", num(f.residual)}, {"used", f.used}};
  }
  report["fits"] = fits;
  for (int k = 1; k <= c.n; ++k) {
    std::ostringstream dat;
    dat << "# log_delta log_gap_" << k << '\n' << std::setprecision(12);
    for (const auto& r : records) {
      double d = r.delta_complement;
      if (which == DeltaKind::Max) d = std::max(r.delta_complement, r.delta_sets);
      const double g = r.gaps[static_cast<size_t>(k - 1)];
      if (d > 1e-10 && g > 1e-10) dat << std::log(d) << ' ' << std::log(g) << '\n';
    }
    art.write("gap_" + std::to_string(k) + ".dat", dat.str());
  }

  // Comparison-bound inequality over every ordered pair.
  std::vector<int> per_k_fail(static_cast<size_t>(c.n), 0);
  int infeasible = 0;
  for (const auto& r : all_reports) {
    if (!r.feasible) ++infeasible;
    for (int k : bound_violations(r)) ++per_k_fail[static_cast<size_t>(k - 1)];
  }
  json bound_check = json::array();
  int total = 0;
  for (int k = 1; k <= c.n; ++k) {
    const int f = per_k_fail[static_cast<size_t>(k - 1)];
    total += f;
    bound_check.push_back({{"k", k}, {"passed", f == 0}, {"violations", f}});
  }
  report["bound_check"] = bound_check;
  o.checks.push_back({"abstract_bound", total == 0,
                      std::to_string(total) + " violations over " + std::to_string(all_reports.size()) +
                          " ordered pairs (" + std::to_string(infeasible) + " infeasible)"});

  if (c.scenario == "rectangle_family") {
    const double rel = tolerance(c, "spectrum_rel", 0.01);
    double worst = 0.0;
    for (const auto& r : records) {
      const auto ea = rectangle_spectrum(1.0, c.n, c.kind), eb = rectangle_spectrum(1.0 + r.delta, c.n, c.kind);
      for (int k = 0; k < c.n; ++k) {
        const auto i = static_cast<size_t>(k);
        const double sa = std::max(ea[i], 1.0), sb = std::max(eb[i], 1.0);
        worst = std::max({worst, std::abs(r.lambda_a[i] - ea[i]) / sa, std::abs(r.lambda_b[i] - eb[i]) / sb});
      }
    }
    o.checks.push_back({"closed_form_spectrum", worst <= rel, "worst relative error " + fmt(worst)});
    const double dh = tolerance(c, "hausdorff_abs", 2e-3);
    double wd = 0.0;
    for (const auto& r : records) wd = std::max(wd, std::abs(r.delta_complement - r.delta));
    o.checks.push_back({"complement_distance", wd <= dh, "worst |d_H - delta| " + fmt(wd)});
  }
  if (c.scenario == "reifenberg_wiggle") {
    json flat = json::array();
    for (double d : c.deltas) {
      const auto rep = estimate_reifenberg_flatness(family(d).b, 0.25);
      flat.push_back({{"delta", d}, {"epsilon_hat", rep.epsilon_hat}});
    }
    report["flatness"] = flat;
  }

  const bool rect_default = c.scenario == "rectangle_family" && c.kind == BoundaryKind::Dirichlet;
  const bool has_range = c.tolerances.count("alpha_min") || c.tolerances.count("alpha_max");
  if (rect_default || has_range) {
    const int k = static_cast<int>(tolerance(c, "alpha_k", 1.0));
    const double lo = tolerance(c, "alpha_min", 0.9), hi = tolerance(c, "alpha_max", 1.05);
    if (k < 1 || k > static_cast<int>(res.fits.size())) {
      o.checks.push_back({"alpha_range", false, "no fit for k = " + std::to_string(k)});
    } else {
      const double a = res.fits[static_cast<size_t>(k - 1)].alpha;
      o.checks.push_back({"alpha_range", a >= lo && a <= hi,
                          "alpha_" + std::to_string(k) + " = " + fmt(a) + " in [" + fmt(lo) + ", " + fmt(hi) + "]"});
    }
  }
}

void run_sector(const RunConfig& c, Artifacts& art, RunOutcome& o, json& report) {
  const double om = c.omega;
  const double expected = 2.0 * std::numbers::pi / om;
  const auto dom = shapes::sector(om, 1.0, c.h);
  const auto mesh = std::make_shared<const TriMesh>(triangulate(dom, c.h));
  const SectorHarmonic hs(om);
  const FEFunction u = FEFunction::interpolate(mesh, [&](Point p) { return hs(p); });

  const double rel = tolerance(c, "sector_rel", 0.05);
  json oracle = json::array();
  double worst = 0.0;
  for (double r : {0.25, 0.5, 0.75}) {
    const double e = region_energy(u, {0.0, 0.0}, r), ex = sector_energy_oracle(om, r);
    worst = std::max(worst, std::abs(e / ex - 1.0));
    oracle.push_back({{"r", r}, {"energy", e}, {"oracle", ex}});
  }
  report["oracle"] = oracle;
  o.checks.push_back({"sector_energy", worst <= rel, "worst relative error " + fmt(worst)});

  std::vector<double> radii;
  const double r_lo = std::max(0.1, 5.0 * c.h), r_hi = 0.75;
  for (int i = 0; i < 8; ++i) radii.push_back(r_lo * std::pow(r_hi / r_lo, i / 7.0));
  const DecayProfile prof = measure_decay(u, {0.0, 0.0}, radii);
  const double erel = tolerance(c, "exponent_rel", 0.10);
  report["fitted_exponent"] = num(prof.fitted_exponent);
  report["expected_exponent"] = expected;
  o.checks.push_back({"decay_exponent", std::abs(prof.fitted_exponent / expected - 1.0) <= erel,
                      "fitted " + fmt(prof.fitted_exponent) + " vs " + fmt(expected)});

  const double mtol = tolerance(c, "monotonicity_rel", 1e-8);
  json mono = json::array();
  std::vector<std::vector<double>> fs_;
  for (double beta : {0.5, 1.0, 1.5}) {
    const auto F = monotonicity_from_energies(radii, prof.energies, beta, 0.0);
    fs_.push_back(F);
    const bool nondec = is_nondecreasing(F, mtol), want = beta <= expected;
    mono.push_back({{"beta", beta}, {"nondecreasing", nondec}, {"expected", want}});
    o.checks.push_back({"monotonicity_beta_" + fmt(beta), nondec == want,
                        std::string(nondec ? "nondecreasing" : "decreasing somewhere") +
                            (want ? ", expected nondecreasing" : ", expected a decrease")});
  }
  report["monotonicity"] = mono;

  std::ostringstream csv, dat;
  csv << std::setprecision(12) << "r,energy,oracle,F_0.5,F_1.0,F_1.5\n";
  dat << std::setprecision(12) << "# log_r log_energy\n";
  for (size_t i = 0; i < radii.size(); ++i) {
    csv << radii[i] << ',' << prof.energies[i] << ',' << sector_energy_oracle(om, radii[i]) << ',' << fs_[0][i] << ','
        << fs_[1][i] << ',' << fs_[2][i] << '\n';
    dat << std::log(radii[i]) << ' ' << std::log(prof.energies[i]) << '\n';
  }
  art.write("records.csv", csv.str());
  art.write("decay.dat", dat.str());
  report["mesh"] = {{"vertices", mesh->n_vertices()}, {"triangles", mesh->n_triangles()}};
}

void run_covering(const RunConfig& c, Artifacts& art, RunOutcome& o, json& report, std::ostream& log) {
  const PolygonalDomain dom = c.domain.empty() ? shapes::unit_square() : domain_from_json(c.domain);
  const double r = c.covering_radius;
  const Covering cov = build_covering(dom, r);
  log << "  covering of " << dom.name() << " at r = " << r << ": " << cov.count << " centers, c_cov " << fmt(cov.c_cov)
      << '\n';
  report["count"] = cov.count;
  report["c_cov"] = cov.c_cov;
  report["radius"] = r;
  report["perimeter"] = dom.perimeter();

  auto nearest = [&](Point p) {
    double d = std::numeric_limits<double>::infinity();
    for (Point x : cov.centers) d = std::min(d, distance(p, x));
    return d;
  };
  double dmin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < cov.centers.size(); ++i)
    for (size_t j = i + 1; j < cov.centers.size(); ++j) dmin = std::min(dmin, distance(cov.centers[i], cov.centers[j]));
  o.checks.push_back({"disjoint_small_balls", dmin >= r / 5.0, "min center distance " + fmt(dmin) + " vs r/5"});

  double worst_cover = 0.0;
  for (Point p : dom.sample_boundary(10000)) worst_cover = std::max(worst_cover, nearest(p));
  o.checks.push_back({"boundary_coverage", worst_cover <= r / 5.0, "max distance to a center " + fmt(worst_cover)});
  o.checks.push_back({"count_bound", cov.count <= 10.0 * dom.perimeter() / r,
                      std::to_string(cov.count) + " <= " + fmt(10.0 * dom.perimeter() / r)});

  std::mt19937_64 rng(c.seed);
  const auto& bb = dom.bbox();
  std::uniform_real_distribution<double> ux(bb.lo.x - 2 * r, bb.hi.x + 2 * r), uy(bb.lo.y - 2 * r, bb.hi.y + 2 * r);
  double worst_sum = 0.0;
  int support_bad = 0, classified = 0;
  for (int i = 0; i < 10000; ++i) {
    const Point p(ux(rng), uy(rng));
    const auto th = partition_of_unity(cov, p);
    double s = 0.0;
    for (double t : th) s += t;
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
    const double d = nearest(p);
    if (d < r) {
      ++classified;
      if (th[0] != 0.0) ++support_bad;
    } else if (d >= 2.0 * r) {
      ++classified;
      if (th[0] != 1.0) ++support_bad;
    }
  }
  o.checks.push_back({"partition_sum", worst_sum <= 1e-12, "max |sum - 1| " + fmt(worst_sum)});
  o.checks.push_back({"theta0_support", support_bad == 0,
                      std::to_string(support_bad) + " bad of " + std::to_string(classified) + " classified points"});

  std::ostringstream csv;
  csv << std::setprecision(17) << "x,y\n";
  for (Point x : cov.centers) csv << x.x << ',' << x.y << '\n';
  art.write("records.csv", csv.str());
  art.write("centers.dat", "# x y\n" + csv.str().substr(4));
}

}  // namespace

RunOutcome run(const RunConfig& c, std::ostream& log) {
  RunOutcome o;
  try {
    validate(c);
  } catch (const ValidationError& e) {
    o.exit_code = kConfigError;
    o.message = e.what();
    log << "config error: " << e.what() << '\n';
    return o;
  }
  const ScenarioInfo* info = find_scenario(c.scenario);
  Artifacts art(c.output_dir);
  json report;
  report["scenario"] = c.scenario;
  report["exercises"] = info->exercises;
  report["kind"] = to_string(c.kind);
  report["config"] = json::parse(config_to_json(c));
  log << "scenario " << c.scenario << " (" << info->exercises << ")\n";
  try {
    if (info->family) run_family(c, art, o, report, log);
    else if (c.scenario == "sector_decay") run_sector(c, art, o, report);
    else run_covering(c, art, o, report, log);
  } catch (const Error& e) {
    o.exit_code = kNumericalFailure;
    o.message = e.what();
  }
  finish(art, c, o, report, log);
  return o;
}

void list_scenarios(std::ostream& out) {
  for (const auto& s : scenarios())
    out << s.name << " -> " << s.exercises << "\n    " << s.summary << "\n    defaults: " << s.defaults << '\n';
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"stability_lab: eigenvalue stability experiments on planar domains"};
  app.require_subcommand(1);
  std::string config_path, scenario, out_dir;
  int n = 0;
  double h = 0.0;
  auto* run_cmd = app.add_subcommand("run", "run a scenario from a JSON config");
  run_cmd->set_help_flag("--help", "print this help and exit");
  run_cmd->add_option("config", config_path, "config file (defaults apply when omitted)");
  run_cmd->add_option("--scenario", scenario, "override the scenario");
  run_cmd->add_option("--n", n, "override the number of eigenvalues");
  run_cmd->add_option("--h", h, "override the mesh size");
  run_cmd->add_option("--out", out_dir, "override the output directory");
  auto* list_cmd = app.add_subcommand("list", "list scenarios");
  auto* validate_cmd = app.add_subcommand("validate", "check a config file");
  validate_cmd->add_option("config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (list_cmd->parsed()) {
    list_scenarios(out);
    return kOk;
  }
  try {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (run_cmd->parsed()) {
      if (!scenario.empty()) c.scenario = scenario;
      if (run_cmd->count("--n")) c.n = n;
      if (run_cmd->count("--h")) c.h = h;
      if (!out_dir.empty()) c.output_dir = out_dir;
    }
    validate(c);
    if (validate_cmd->parsed()) {
      out << "config ok: scenario " << c.scenario << '\n';
      return kOk;
    }
    const RunOutcome o = run(c, out);
    if (o.exit_code != kOk) err << "stability_lab: " << o.message << '\n';
    return o.exit_code;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace specstab::lab
