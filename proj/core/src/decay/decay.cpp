#include "specstab/decay/decay.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "specstab/error.hpp"

namespace specstab {

namespace {

void check_omega(double omega) {
  if (!(omega > 0.0) || omega > 2.0 * std::numbers::pi + 1e-14)
    throw ValidationError("sector: opening must lie in (0, 2 pi]");
}

void check_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw ValidationError("decay: empty radius list");
  for (size_t i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw ValidationError("decay: radii must be positive and increasing");
}

}  // namespace

double sector_energy_oracle(double omega, double r) {
  check_omega(omega);
  if (!(r > 0.0)) throw ValidationError("sector_energy_oracle: r must be positive");
  return 0.5 * std::numbers::pi * std::pow(r, 2.0 * std::numbers::pi / omega);
}

SectorHarmonic::SectorHarmonic(double omega) : omega_(omega), a_(0.0) {
  check_omega(omega);
  a_ = std::numbers::pi / omega;
}

SectorSample SectorHarmonic::sample(Point p) const {
  SectorSample s;
  const double r = norm(p);
  if (r == 0.0) {
    s.value = 0.0;
    if (a_ < 1.0) {
      s.singular = true;
      s.gradient = {std::numeric_limits<double>::infinity(), 0.0};
    } else if (a_ == 1.0) {
      s.gradient = {1.0, 0.0};
    }
    return s;
  }
  const double th = std::atan2(p.y, p.x);
  const double ra = std::pow(r, a_);
  s.value = ra * std::cos(a_ * th);
  // Radial and angular derivatives, then back to Cartesian.
  const double dr = a_ * ra / r * std::cos(a_ * th);
  const double dt = -a_ * ra / r * std::sin(a_ * th);
  const double c = std::cos(th), sn = std::sin(th);
  s.gradient = {dr * c - dt * sn, dr * sn + dt * c};
  return s;
}

SectorHarmonic sector_harmonic(double omega) { return SectorHarmonic(omega); }

DecayProfile measure_decay(const FEFunction& u, Point x0, const std::vector<double>& radii, double eigenvalue,
                           int n_subdiv) {
  check_radii(radii);
  DecayProfile p;
  p.center = x0;
  p.radii = radii;
  p.eigenvalue = eigenvalue;
  std::vector<double> xs, ys;
  for (double r : radii) {
    const double e = region_energy(u, x0, r, n_subdiv);
    p.energies.push_back(e);
    if (e > 1e-14) {
      xs.push_back(std::log(r));
      ys.push_back(std::log(e));
    }
  }
  if (xs.empty()) throw NumericalError("measure_decay: all energies vanish, exponent undefined");
  if (xs.size() < 3) {
    p.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    return p;
  }
  const auto m = static_cast<double>(xs.size());
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
  p.fitted_exponent = sxy / sxx;
  return p;
}

std::vector<double> default_decay_radii(double r0) {
  if (!(r0 > 0.0)) throw ValidationError("default_decay_radii: r0 must be positive");
  std::vector<double> out;
  for (int i = 0; i < 12; ++i) out.push_back(r0 / 64.0 * std::pow(32.0, i / 11.0));
  return out;
}

std::vector<double> monotonicity_from_energies(const std::vector<double>& radii, const std::vector<double>& energies,
                                               double beta, double C0) {
  if (!(beta > 0.0 && beta < 2.0)) throw ValidationError("monotonicity: beta must lie in (0, 2)");
  if (radii.size() != energies.size()) throw ValidationError("monotonicity: radii and energies differ in length");
  check_radii(radii);
  std::vector<double> out;
  for (size_t i = 0; i < radii.size(); ++i)
    out.push_back(std::pow(radii[i], -beta) * energies[i] + C0 * std::pow(radii[i], 2.0 - beta));
  return out;
}

std::vector<double> monotonicity_profile(const FEFunction& u, Point x0, double beta, double C0,
                                         const std::vector<double>& radii, int n_subdiv) {
  check_radii(radii);
  std::vector<double> e;
  for (double r : radii) e.push_back(weighted_region_energy(u, x0, r, 0.0, n_subdiv));
  return monotonicity_from_energies(radii, e, beta, C0);
}

bool is_nondecreasing(const std::vector<double>& values, double rel_tol) {
  for (size_t i = 1; i < values.size(); ++i) {
    const double scale = std::max(std::abs(values[i]), std::abs(values[i - 1]));
    if (values[i] - values[i - 1] < -rel_tol * scale) return false;
  }
  return true;
}

double minimal_c0(const std::vector<double>& radii, const std::vector<double>& energies, double beta) {
  const auto f = monotonicity_from_energies(radii, energies, beta, 0.0);
  double c0 = 0.0;
  for (size_t i = 1; i < f.size(); ++i) {
    const double need = (f[i - 1] - f[i]) / (std::pow(radii[i], 2.0 - beta) - std::pow(radii[i - 1], 2.0 - beta));
    c0 = std::max(c0, need);
  }
  return c0;
}

double dirichlet_linf_bound(double lambda, int dim) {
  if (!(lambda > 0.0) || dim < 1) throw ValidationError("dirichlet_linf_bound: need lambda > 0 and dim >= 1");
  return std::pow(lambda * std::numbers::e / (2.0 * std::numbers::pi * dim), dim / 4.0);
}

void write_decay_csv(std::ostream& os, const DecayProfile& p, double beta, double C0) {
  const auto f = monotonicity_from_energies(p.radii, p.energies, beta, C0);
  const auto old = os.precision(12);
  os << "r,energy,F_beta\n";
  for (size_t i = 0; i < p.radii.size(); ++i) os << p.radii[i] << ',' << p.energies[i] << ',' << f[i] << '\n';
  os.precision(old);
}

}  // namespace specstab
