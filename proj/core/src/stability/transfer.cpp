#include "specstab/stability/transfer.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "specstab/error.hpp"
#include "specstab/fem/operators.hpp"
#include "specstab/geometry/flatness.hpp"

namespace specstab {

namespace {

/// Mean of u over B(y, r) intersected with the mesh, by a polar midpoint rule.
double disk_mean(const FEFunction& u, Point y, double r) {
  constexpr int kRadial = 8, kAngular = 32;
  double sum = 0.0, weight = 0.0;
  for (int i = 0; i < kRadial; ++i) {
    const double rho = r * (i + 0.5) / kRadial;
    for (int j = 0; j < kAngular; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / kAngular;
      const auto v = u.eval(y + Point(std::cos(phi), std::sin(phi)) * rho);
      if (!v) continue;
      sum += rho * *v;
      weight += rho;
    }
  }
  if (!(weight > 0.0)) throw InfeasibleError("neumann_transfer: local disk misses the domain");
  return sum / weight;
}

bool disk_inside(const PolygonalDomain& d, Point y, double r) {
  return d.contains(y) && d.boundary_distance(y) >= r * (1.0 - 1e-9);
}

TransferDisk place_disk(const PolygonalDomain& dom_b, Point x, double delta) {
  TransferDisk disk;
  disk.center = x;
  const LineFit fit = best_line(dom_b, x, 5.0 * delta, 64);
  const Point nrm(-std::sin(fit.angle), std::cos(fit.angle));
  const Point plus = x + nrm * (3.0 * delta), minus = x - nrm * (3.0 * delta);
  const bool in_plus = disk_inside(dom_b, plus, delta), in_minus = disk_inside(dom_b, minus, delta);
  if (in_plus != in_minus) {
    disk.Y = in_plus ? plus : minus;
    return disk;
  }
  disk.fallback = true;
  int edge = -1;
  dom_b.closest_boundary_point(x, &edge);
  const Point nearest = x + dom_b.inward_normal(edge) * (3.0 * delta);
  if (disk_inside(dom_b, nearest, delta)) {
    disk.Y = nearest;
    return disk;
  }
  // Corners: average the inward normals of all edges near x.
  const double reach = 5.0 * delta;
  Point avg(0.0, 0.0);
  for (int e : dom_b.edges_near({x - Point(reach, reach), x + Point(reach, reach)})) {
    const auto& s = dom_b.edges()[static_cast<size_t>(e)];
    if (segment_distance(x, s.a, s.b) <= reach) avg += dom_b.inward_normal(e);
  }
  if (norm(avg) > 1e-12) {
    const Point cand = x + avg * (3.0 * delta / norm(avg));
    if (dom_b.contains(cand)) {
      disk.Y = cand;
      return disk;
    }
  }
  if (dom_b.contains(nearest)) {
    disk.Y = nearest;
    return disk;
  }
  std::ostringstream os;
  os << "neumann_transfer: disk center for covering center (" << x.x << ", " << x.y
     << ") lands outside the domain; flatness is too poor for delta = " << delta;
  throw InfeasibleError(os.str());
}

}  // namespace

TransferResult neumann_transfer_detailed(const FEFunction& u_b, const PolygonalDomain& dom_a,
                                         const PolygonalDomain& dom_b, const Covering& cov, double delta,
                                         std::shared_ptr<const TriMesh> mesh_a) {
  if (!mesh_a) throw ValidationError("neumann_transfer: null mesh");
  if (!(delta > 0.0)) throw ValidationError("neumann_transfer: delta must be positive");
  if (delta > 1.0 || 5.0 * delta > dom_b.diameter())
    throw ValidationError("neumann_transfer: delta outside the admissible range");
  if (!cov.centers.empty() && std::abs(cov.radius - 2.5 * delta) > 1e-12 * delta)
    throw ValidationError("neumann_transfer: covering radius must be 5 delta / 2");
  (void)dom_a;

  TransferResult out;
  for (Point x : cov.centers) {
    TransferDisk d = place_disk(dom_b, x, delta);
    d.mean = disk_mean(u_b, d.Y, delta);
    out.disks.push_back(d);
  }

  const auto& verts = mesh_a->vertices();
  Vector vals(mesh_a->n_vertices());
  for (int v = 0; v < mesh_a->n_vertices(); ++v) {
    const Point z = verts[static_cast<size_t>(v)];
    double inside = 0.0;
    if (const auto ub = u_b.eval(z)) inside = *ub;
    if (cov.centers.empty()) {
      vals[v] = inside;
      continue;
    }
    const auto theta = partition_of_unity(cov, z);
    double s = theta[0] * inside;
    for (size_t i = 0; i < out.disks.size(); ++i) s += theta[i + 1] * out.disks[i].mean;
    vals[v] = s;
  }
  out.u = FEFunction(mesh_a, std::move(vals));
  return out;
}

FEFunction neumann_transfer(const FEFunction& u_b, const PolygonalDomain& dom_a, const PolygonalDomain& dom_b,
                            const Covering& cov, double delta, std::shared_ptr<const TriMesh> mesh_a) {
  return neumann_transfer_detailed(u_b, dom_a, dom_b, cov, delta, std::move(mesh_a)).u;
}

double combined_distance(const FEFunction& v_a, const FEFunction& u_b, const CrossMatrices& cross) {
  const Vector& v = v_a.values();
  const Vector& u = u_b.values();
  if (cross.K.rows() != v.size() || cross.K.cols() != u.size())
    throw ValidationError("combined_distance: cross matrices do not match the functions");
  const auto Ka = assemble_stiffness(v_a.mesh()), Ma = assemble_mass(v_a.mesh());
  const auto Kb = assemble_stiffness(u_b.mesh()), Mb = assemble_mass(u_b.mesh());
  const double d = Ka.form(v, v) + Ma.form(v, v) - 2.0 * v.dot(cross.K * u + cross.M * u) + Kb.form(u, u) +
                   Mb.form(u, u);
  return std::max(0.0, d);
}

}  // namespace specstab
