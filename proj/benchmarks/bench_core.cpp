#include <benchmark/benchmark.h>

#include <memory>

#include "specstab/geometry/covering.hpp"
#include "specstab/geometry/flatness.hpp"
#include "specstab/geometry/hausdorff.hpp"
#include "specstab/geometry/shapes.hpp"
#include "specstab/meshing/triangulate.hpp"
#include "specstab/stability/projection.hpp"

using namespace specstab;

namespace {

double h_of(const benchmark::State& s) { return 1.0 / static_cast<double>(s.range(0)); }

std::shared_ptr<const TriMesh> mesh_of(const PolygonalDomain& d, double h) {
  return std::make_shared<const TriMesh>(triangulate(d, h));
}

}  // namespace

static void BM_Triangulate(benchmark::State& state) {
  const auto d = shapes::l_shape();
  for (auto _ : state) benchmark::DoNotOptimize(triangulate(d, h_of(state)));
  state.counters["triangles"] = triangulate(d, h_of(state)).n_triangles();
}
BENCHMARK(BM_Triangulate)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Assemble(benchmark::State& state) {
  const TriMesh m = triangulate(shapes::unit_square(), h_of(state));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_stiffness(m));
    benchmark::DoNotOptimize(assemble_mass(m));
  }
}
BENCHMARK(BM_Assemble)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_DirichletEigen(benchmark::State& state) {
  const auto m = mesh_of(shapes::unit_square(), h_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(m, 5));
}
BENCHMARK(BM_DirichletEigen)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_NeumannEigen(benchmark::State& state) {
  const auto m = mesh_of(shapes::unit_square(), h_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(solve_neumann(m, 5));
}
BENCHMARK(BM_NeumannEigen)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_CrossOverlay(benchmark::State& state) {
  const auto a = mesh_of(shapes::unit_square(), h_of(state));
  const auto b = mesh_of(shapes::rectangle(0, 0, 1, 1.04), h_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(cross_matrices(*a, *b));
}
BENCHMARK(BM_CrossOverlay)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_CrossSampled(benchmark::State& state) {
  const auto a = mesh_of(shapes::unit_square(), 0.04);
  const auto b = mesh_of(shapes::rectangle(0, 0, 1, 1.04), 0.04);
  const CrossOptions opts{CrossMethod::Sampled, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(cross_matrices(*a, *b, opts));
}
BENCHMARK(BM_CrossSampled)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_ProjectionConstants(benchmark::State& state) {
  const auto a = mesh_of(shapes::unit_square(), h_of(state));
  const auto b = mesh_of(shapes::rectangle(0, 0, 1, 1.04), h_of(state));
  const auto eb = solve_dirichlet(b, 5);
  for (auto _ : state) benchmark::DoNotOptimize(projection_constants(eb, a));
}
BENCHMARK(BM_ProjectionConstants)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_Hausdorff(benchmark::State& state) {
  const auto a = shapes::unit_square();
  const auto b = shapes::wiggle_square(0.1, 7);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_distance_complements(a, b));
}
BENCHMARK(BM_Hausdorff)->Unit(benchmark::kMillisecond);

static void BM_Covering(benchmark::State& state) {
  const auto d = shapes::wiggle_square(0.1, 7);
  for (auto _ : state) benchmark::DoNotOptimize(build_covering(d, h_of(state)));
}
BENCHMARK(BM_Covering)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_Flatness(benchmark::State& state) {
  const auto d = shapes::wiggle_square(0.1, 7);
  FlatnessOptions o;
  o.n_boundary = 64;
  o.n_scales = 8;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_reifenberg_flatness(d, 0.2, o));
}
BENCHMARK(BM_Flatness)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
