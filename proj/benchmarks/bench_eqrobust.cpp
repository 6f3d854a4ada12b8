#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "eqrobust/equilib2d.hpp"
#include "eqrobust/equilib3d.hpp"
#include "eqrobust/geom2d.hpp"
#include "eqrobust/geom3d.hpp"
#include "eqrobust/robust2d.hpp"

using namespace eqrobust;

namespace {

geom2d::ConvexPolygon2 unit_square() {
  return geom2d::ConvexPolygon2::from_points(std::vector<geom2d::Point2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

void BM_Equilibria2D(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto poly = geom2d::random_convex_polygon(rng, static_cast<int>(state.range(0)));
  const auto c = geom2d::centroid(poly);
  for (auto _ : state) benchmark::DoNotOptimize(equilib2d::equilibria(poly, c));
}
BENCHMARK(BM_Equilibria2D)->Arg(8)->Arg(64)->Arg(512);

void BM_RhoInExact2D(benchmark::State& state) {
  const auto poly = geom2d::regular_ngon(static_cast<int>(state.range(0)), geom2d::NgonScale::unit_perimeter);
  for (auto _ : state) benchmark::DoNotOptimize(robust2d::rho_in_exact(poly, {0, 0}));
}
BENCHMARK(BM_RhoInExact2D)->Arg(6)->Arg(48);

void BM_RhoExExact2D(benchmark::State& state) {
  const auto poly = geom2d::regular_ngon(static_cast<int>(state.range(0)), geom2d::NgonScale::unit_perimeter);
  for (auto _ : state) benchmark::DoNotOptimize(robust2d::rho_ex_exact(poly, {0, 0}));
}
BENCHMARK(BM_RhoExExact2D)->Arg(6)->Arg(48);

void BM_LineBoundSquare(benchmark::State& state) {
  const auto sq = unit_square();
  for (auto _ : state) benchmark::DoNotOptimize(robust2d::full_robustness_line_bound(sq));
}
BENCHMARK(BM_LineBoundSquare)->Unit(benchmark::kMillisecond);

void BM_SquareSweep(benchmark::State& state) {
  const auto sq = unit_square();
  for (auto _ : state) {
    benchmark::DoNotOptimize(robust2d::truncation_sweep(sq, static_cast<std::size_t>(state.range(0)), 7));
  }
}
BENCHMARK(BM_SquareSweep)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Hull3(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<geom3d::Point3> pts;
  for (int i = 0; i < state.range(0); ++i) pts.push_back(geom3d::random_unit_vector(rng));
  for (auto _ : state) benchmark::DoNotOptimize(geom3d::hull3(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hull3)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_Classify3(benchmark::State& state) {
  const auto mesh = geom3d::ellipsoid_mesh(1.0, 1.7, 2.9, static_cast<int>(state.range(0)));
  const auto c = geom3d::centroid3(mesh);
  for (auto _ : state) benchmark::DoNotOptimize(equilib3d::classify3(mesh, c));
}
BENCHMARK(BM_Classify3)->Arg(500)->Arg(2000);

void BM_RhoInSampled3D(benchmark::State& state) {
  const auto cube = geom3d::platonic(geom3d::PlatonicSolid::cube);
  for (auto _ : state) benchmark::DoNotOptimize(equilib3d::rho_in_sampled_3d(cube, {}, 256));
}
BENCHMARK(BM_RhoInSampled3D)->Unit(benchmark::kMillisecond);

void BM_PlaneSearchCube(benchmark::State& state) {
  const auto cube = geom3d::platonic(geom3d::PlatonicSolid::cube);
  equilib3d::PlaneSearchOptions opt;
  opt.normals = 64;
  opt.offsets = 16;
  for (auto _ : state) {
    benchmark::DoNotOptimize(equilib3d::plane_truncation_search(cube, equilib3d::TruncationTarget::reduce_S, opt));
  }
}
BENCHMARK(BM_PlaneSearchCube)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
