#include "specstab/lab/scenarios.hpp"

#include "specstab/geometry/shapes.hpp"
#include "specstab/io/json_io.hpp"

namespace specstab::lab {

const std::vector<ScenarioInfo>& scenarios() {
  static const std::vector<ScenarioInfo> all{
      {"rectangle_family", "Lipschitz-domain stability theorem (linear rate)",
       "unit square against (0,1)x(0,1+delta); closed-form spectra", "n=5 h=0.02 deltas=0.01,0.02,0.04,0.08", true},
      {"shifted_square", "abstract eigenvalue comparison lemma",
       "unit square against its translate by (delta, 0); equal spectra, nonzero projection error",
       "n=5 h=0.02 deltas=0.01,0.02,0.04,0.08", true},
      {"sawtooth_lipschitz", "Lipschitz-domain stability theorem (linear rate)",
       "unit square against a 4-tooth sawtooth top edge of height delta", "n=5 h=0.02 deltas=0.01,0.02,0.04,0.08",
       true},
      {"reifenberg_wiggle", "Reifenberg-flat stability theorems (Dirichlet and Neumann)",
       "unit square against a seeded multiscale wiggle of amplitude 2 delta; exponent reported only",
       "n=5 h=0.02 deltas=0.01,0.02,0.04,0.08", true},
      {"sector_decay", "sector energy decay and boundary monotonicity",
       "sector harmonic interpolated on a sector mesh; energies against (pi/2) r^(2 pi/omega)",
       "omega=3pi/2 h=0.02", false},
      {"covering_demo", "boundary covering and partition-of-unity lemmas",
       "covering invariants and partition of unity on a domain", "covering_radius=0.1 domain=unit square", false},
      {"custom", "abstract eigenvalue comparison lemma",
       "given domain against its vertical stretch by 1+delta about the bottom of its bounding box",
       "domain required", true},
  };
  return all;
}

const ScenarioInfo* find_scenario(const std::string& name) {
  for (const auto& s : scenarios())
    if (s.name == name) return &s;
  return nullptr;
}

DomainFamily scenario_family(const RunConfig& c) {
  if (c.scenario == "rectangle_family")
    return [](double d) { return DomainPair{shapes::unit_square(), shapes::rectangle(0.0, 0.0, 1.0, 1.0 + d)}; };
  if (c.scenario == "shifted_square")
    return [](double d) { return DomainPair{shapes::unit_square(), shapes::unit_square().translated({d, 0.0})}; };
  if (c.scenario == "sawtooth_lipschitz")
    return [](double d) { return DomainPair{shapes::unit_square(), shapes::sawtooth_rectangle(1.0, 1.0, 4, 8.0 * d)}; };
  if (c.scenario == "reifenberg_wiggle") {
    const auto seed = c.seed;
    return [seed](double d) { return DomainPair{shapes::unit_square(), shapes::wiggle_square(2.0 * d, seed)}; };
  }
  if (c.scenario == "custom") {
    const PolygonalDomain base = domain_from_json(c.domain);
    return [base](double d) {
      Ring outer = base.outer();
      std::vector<Ring> holes = base.holes();
      const double y0 = base.bbox().lo.y;
      auto stretch = [&](Ring& r) {
        for (auto& p : r) p.y = y0 + (p.y - y0) * (1.0 + d);
      };
      stretch(outer);
      for (auto& h : holes) stretch(h);
      return DomainPair{base, PolygonalDomain(base.name() + "_stretched", std::move(outer), std::move(holes))};
    };
  }
  throw ConfigError("field 'scenario': \"" + c.scenario + "\" is not a family scenario");
}

}  // namespace specstab::lab
