#include <benchmark/benchmark.h>

#include "vemix/harness.hpp"

using namespace vemix;

namespace {

const PolygonalMesh& voro_mesh() {
  static const PolygonalMesh mesh = generate_mesh(MeshFamily::voro, 8, 1);
  return mesh;
}

void BM_LocalProjectors(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const ElementGeometry g = element_geometry(voro_mesh(), 7);
  for (auto _ : state) {
    const LocalElement el = build_local_element(k, g, 7);
    benchmark::DoNotOptimize(compute_projectors(el));
  }
}
BENCHMARK(BM_LocalProjectors)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);

void BM_Discretization(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Discretization(voro_mesh(), k));
}
BENCHMARK(BM_Discretization)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_AssembleStokes(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Discretization disc(voro_mesh(), k);
  const ProblemData data = manufactured_case("stokes_s51").problem_data(StiffnessForm::eps, false);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(disc, StiffnessForm::eps, data));
}
BENCHMARK(BM_AssembleStokes)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_SolveStokes(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Discretization disc(generate_mesh(MeshFamily::quad, n, 1), 2);
  const SaddleSystem sys = assemble(disc, StiffnessForm::eps,
                                    manufactured_case("stokes_s51").problem_data(StiffnessForm::eps, false));
  for (auto _ : state) benchmark::DoNotOptimize(solve_linear(sys));
  state.counters["gndof"] = sys.num_velocity();
}
BENCHMARK(BM_SolveStokes)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
