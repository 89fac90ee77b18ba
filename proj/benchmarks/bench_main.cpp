#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>

#include "vfrac/elasticity.hpp"
#include "vfrac/griffith.hpp"
#include "vfrac/mesh.hpp"
#include "vfrac/phasefield.hpp"

namespace {

using namespace vfrac;

// Strip of half height 1 and width 10 at mesh size 1/n.
TriMesh strip_mesh(int n) {
  const TagRule tags{BoundaryTag::dirichlet, BoundaryTag::neumann_free, BoundaryTag::dirichlet,
                     BoundaryTag::neumann_free};
  return build_rect_mesh(10.0, 2.0, 1.0 / n, tags, {0.0, -1.0});
}

MaterialParams strip_material() {
  MaterialParams m;
  m.plane_mode = PlaneMode::plane_stress;
  m.epsilon = 0.1;
  return m;
}

LoadProgram shear(double a) { return LoadProgram::strip_shear(a, 1.0, 0.1); }

NodalField seed(const TriMesh& mesh, double eps) {
  NodalField z = NodalField::scalar(mesh.node_count());
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    const Point p = mesh.nodes[i];
    const double d = p.x <= 1.0 ? std::abs(p.y) : std::hypot(p.x - 1.0, p.y);
    z(i) = std::exp(-d / eps);
  }
  return z;
}

void BM_AssembleStiffness(benchmark::State& state) {
  const TriMesh mesh = strip_mesh(static_cast<int>(state.range(0)));
  const MaterialParams mat = strip_material();
  const NodalField z = seed(mesh, mat.epsilon);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(mesh, z, mat));
  state.counters["nodes"] = static_cast<double>(mesh.node_count());
}
BENCHMARK(BM_AssembleStiffness)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SolveFresh(benchmark::State& state) {
  const TriMesh mesh = strip_mesh(static_cast<int>(state.range(0)));
  const MaterialParams mat = strip_material();
  const NodalField z = seed(mesh, mat.epsilon);
  const LoadState loads = make_load_state(mesh, shear(0.8), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_displacement(mesh, z, mat, loads));
  state.counters["nodes"] = static_cast<double>(mesh.node_count());
}
BENCHMARK(BM_SolveFresh)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

// Reused solver with slowly changing damage, as inside a time loop.
void BM_SolveReused(benchmark::State& state) {
  const TriMesh mesh = strip_mesh(static_cast<int>(state.range(0)));
  const MaterialParams mat = strip_material();
  NodalField z = seed(mesh, mat.epsilon);
  const LoadState loads = make_load_state(mesh, shear(0.8), 1.0);
  DisplacementSolver solver(mesh, mat, loads.dirichlet_nodes);
  for (auto _ : state) {
    for (double& v : z.values) v = std::min(1.0, v * 1.0001);
    benchmark::DoNotOptimize(solver.solve(z, loads));
  }
}
BENCHMARK(BM_SolveReused)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_PhaseFieldStep(benchmark::State& state) {
  const TriMesh mesh = strip_mesh(static_cast<int>(state.range(0)));
  const MaterialParams mat = strip_material();
  const NodalField z = seed(mesh, mat.epsilon);
  const LoadState loads = make_load_state(mesh, shear(0.8), 1.0);
  const ElementField w = energy_density(mesh, solve_displacement(mesh, z, mat, loads), mat);
  PhaseFieldSolver solver(mesh, mat);
  for (auto _ : state) benchmark::DoNotOptimize(solver.step(z, w, 1e-3));
}
BENCHMARK(BM_PhaseFieldStep)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_GriffithOde(benchmark::State& state) {
  const EnergyProfile profile = figure3_energy_profile();
  const double dt = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_crack_length(profile, 1.0, RateLaw::linear(0.05), 0.0, 0.0, 1.2, dt));
  }
}
BENCHMARK(BM_GriffithOde)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
