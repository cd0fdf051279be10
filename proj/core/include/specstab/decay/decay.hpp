#pragma once

#include <iosfwd>
#include <vector>

#include "specstab/fem/function.hpp"

namespace specstab {

/// Dirichlet energy of r^(pi/omega) cos(theta pi/omega) over the sector of radius r:
/// (pi/2) r^(2 pi/omega).
double sector_energy_oracle(double omega, double r);

struct SectorSample {
  double value = 0.0;
  Point gradient;
  /// Gradient blows up at the apex (pi/omega < 1); the gradient is then reported as +inf.
  bool singular = false;
};

/// u = r^a cos(a theta) with a = pi/omega, theta measured from the +x bisector, vanishing
/// on the edges theta = +-omega/2.
class SectorHarmonic {
 public:
  explicit SectorHarmonic(double omega);

  double omega() const { return omega_; }
  double exponent() const { return a_; }
  SectorSample sample(Point p) const;
  double operator()(Point p) const { return sample(p).value; }

 private:
  double omega_;
  double a_;
};

SectorHarmonic sector_harmonic(double omega);

struct DecayProfile {
  Point center;
  std::vector<double> radii;
  std::vector<double> energies;
  double fitted_exponent = 0.0;  ///< NaN when fewer than 3 radii carry energy
  double eigenvalue = 0.0;
};

/// Energies over B(x0, r) for each radius and the log-log slope over radii with energy
/// above 1e-14. Throws NumericalError when every energy is below that floor.
DecayProfile measure_decay(const FEFunction& u, Point x0, const std::vector<double>& radii, double eigenvalue = 0.0,
                           int n_subdiv = 5);

/// 12 radii, geometric from r0/64 up to r0/2, increasing.
std::vector<double> default_decay_radii(double r0);

/// F(r) = r^-beta * weighted energy over B(x0, r) (weight |x-x0|^(2-N), so none in the plane)
/// + C0 r^(2-beta).
std::vector<double> monotonicity_profile(const FEFunction& u, Point x0, double beta, double C0,
                                         const std::vector<double>& radii, int n_subdiv = 5);

/// Same functional from precomputed energies.
std::vector<double> monotonicity_from_energies(const std::vector<double>& radii, const std::vector<double>& energies,
                                               double beta, double C0);

/// Whether consecutive differences are >= -rel_tol * max(|F_i|, |F_i+1|).
bool is_nondecreasing(const std::vector<double>& values, double rel_tol = 1e-8);

/// Smallest C0 >= 0 that makes F nondecreasing over the sampled radii.
double minimal_c0(const std::vector<double>& radii, const std::vector<double>& energies, double beta);

/// Eigenfunction sup-norm bound (lambda e / (2 pi N))^(N/4) ||v||_2 in dimension N.
double dirichlet_linf_bound(double lambda, int dim = 2);

/// Columns r, energy, F_beta.
void write_decay_csv(std::ostream& os, const DecayProfile& p, double beta, double C0 = 0.0);

}  // namespace specstab
