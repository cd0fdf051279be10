#pragma once

// Reference finite-element quantities computed by formulas that do not share code with the
// library: cotangent weights for the stiffness, dense generalized eigenproblems, and
// closed-form spectra.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "specstab/meshing/trimesh.hpp"

namespace oracle {

/// Local P1 stiffness from the cotangent formula: K_ij = -cot(angle opposite ij) / 2.
inline std::array<std::array<double, 3>, 3> cot_stiffness(specstab::Point a, specstab::Point b, specstab::Point c) {
  const std::array<specstab::Point, 3> p{a, b, c};
  std::array<std::array<double, 3>, 3> k{};
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, o = (i + 2) % 3;
    const specstab::Point u = p[i] - p[o], v = p[j] - p[o];
    const double cot = (u.x * v.x + u.y * v.y) / std::abs(u.x * v.y - u.y * v.x);
    k[i][j] = k[j][i] = -0.5 * cot;
  }
  for (int i = 0; i < 3; ++i) k[i][i] = -(k[i][(i + 1) % 3] + k[i][(i + 2) % 3]);
  return k;
}

/// Dense global stiffness and mass assembled element by element.
inline void dense_operators(const specstab::TriMesh& m, Eigen::MatrixXd& K, Eigen::MatrixXd& M) {
  const int n = m.n_vertices();
  K = Eigen::MatrixXd::Zero(n, n);
  M = Eigen::MatrixXd::Zero(n, n);
  const auto& v = m.vertices();
  for (int t = 0; t < m.n_triangles(); ++t) {
    const auto& tri = m.triangles()[t];
    const auto k = cot_stiffness(v[tri[0]], v[tri[1]], v[tri[2]]);
    const double area = m.triangle_area(t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        K(tri[i], tri[j]) += k[i][j];
        M(tri[i], tri[j]) += area / 12.0 * (i == j ? 2.0 : 1.0);
      }
  }
}

/// Smallest n generalized eigenvalues of K x = lambda M x restricted to `keep` rows/columns.
inline std::vector<double> dense_eigenvalues(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M,
                                             const std::vector<int>& keep, int n) {
  const int d = static_cast<int>(keep.size());
  Eigen::MatrixXd k(d, d), m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      k(i, j) = K(keep[i], keep[j]);
      m(i, j) = M(keep[i], keep[j]);
    }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, m);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + std::min(n, d));
  return out;
}

/// Sorted pi^2 (p^2/w^2 + q^2/h^2) over p, q >= 1 (Dirichlet) or p, q >= 0 (Neumann).
inline std::vector<double> rectangle_spectrum(double w, double h, int n, bool neumann) {
  std::vector<double> v;
  const int lo = neumann ? 0 : 1;
  for (int p = lo; p < lo + n + 2; ++p)
    for (int q = lo; q < lo + n + 2; ++q)
      v.push_back(std::numbers::pi * std::numbers::pi * (p * p / (w * w) + q * q / (h * h)));
  std::sort(v.begin(), v.end());
  v.resize(static_cast<size_t>(n));
  return v;
}

}  // namespace oracle
