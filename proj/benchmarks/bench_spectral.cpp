#include <benchmark/benchmark.h>

#include <map>

#include "sispec/generators.hpp"
#include "sispec/spectral.hpp"

namespace {

const sispec::TriMesh& sphere(int subdivisions) {
  static std::map<int, sispec::TriMesh> cache;
  auto it = cache.find(subdivisions);
  if (it == cache.end())
    it = cache.emplace(subdivisions, sispec::icosphere(subdivisions)).first;
  return it->second;
}

void BM_AssembleStiffness(benchmark::State& state) {
  const auto& mesh = sphere(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(sispec::assemble_stiffness(mesh));
  state.SetLabel(std::to_string(mesh.num_vertices()) + " vertices");
}
BENCHMARK(BM_AssembleStiffness)->Arg(2)->Arg(3)->Arg(4);

void BM_AssembleMass(benchmark::State& state) {
  const auto& mesh = sphere(static_cast<int>(state.range(0)));
  const auto est = sispec::gaussian_curvature(mesh);
  const auto curv = sispec::clip_curvature(mesh, est.vertex_k);
  for (auto _ : state)
    benchmark::DoNotOptimize(sispec::assemble_mass(mesh, curv, 0.6));
}
BENCHMARK(BM_AssembleMass)->Arg(2)->Arg(3)->Arg(4);

void BM_Eigensolve(benchmark::State& state) {
  const auto& mesh = sphere(static_cast<int>(state.range(0)));
  const auto stiffness = sispec::assemble_stiffness(mesh);
  const auto mass = sispec::assemble_mass(mesh);
  for (auto _ : state)
    benchmark::DoNotOptimize(sispec::eigensolve(stiffness, mass, 30));
  state.SetLabel(std::to_string(mesh.num_vertices()) + " vertices");
}
BENCHMARK(BM_Eigensolve)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_GaussianCurvature(benchmark::State& state) {
  const auto& mesh = sphere(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(sispec::gaussian_curvature(mesh));
}
BENCHMARK(BM_GaussianCurvature)->Arg(2)->Arg(3)->Arg(4)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
