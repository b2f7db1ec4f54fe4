#include <benchmark/benchmark.h>

#include "fdkp/field.hpp"
#include "fdkp/harness.hpp"
#include "fdkp/lumps.hpp"
#include "fdkp/norms.hpp"
#include "fdkp/reduction.hpp"

using namespace fdkp;
using namespace fdkp::spectral;

namespace {

Grid grid_for(int n) { return make_grid(100.0, 100.0, n, n); }

SymbolParams params() {
  SymbolParams p;
  p.epsilon = 0.1;
  return p;
}

void bm_transform_roundtrip(benchmark::State& state) {
  const Grid grid = grid_for(static_cast<int>(state.range(0)));
  // sample-only input so both directions do real work
  const Field f = Field::from_samples(
      grid, Frame::KPScaled, random_field(grid, Frame::KPScaled, 1, 1.0).with_samples().samples());
  for (auto _ : state) {
    const Field g = transform(f, Direction::Forward);
    const Field h = Field::from_spectrum(grid, Frame::KPScaled, g.spectrum());
    benchmark::DoNotOptimize(transform(h, Direction::Backward));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_transform_roundtrip)->Arg(128)->Arg(256)->Arg(512)->Complexity();

void bm_pointwise_square(benchmark::State& state) {
  const Grid grid = grid_for(static_cast<int>(state.range(0)));
  const Field f = random_field(grid, Frame::KPScaled, 2, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(pointwise_square(f));
}
BENCHMARK(bm_pointwise_square)->Arg(128)->Arg(256);

void bm_norm_y1(benchmark::State& state) {
  const Grid grid = grid_for(256);
  const SymbolParams p = params();
  const Field f = random_field(grid, Frame::KPScaled, 3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(norm(f, NormKind::yr(1.0), p));
}
BENCHMARK(bm_norm_y1);

void bm_solve_u2(benchmark::State& state) {
  const Grid grid = grid_for(static_cast<int>(state.range(0)));
  const SymbolParams p = params();
  const solver::SolverConfig cfg;
  const Field u1 = solver::to_physical_frame(
      project_cone(lumps::sample_lump(grid, 1, Frame::KPScaled, p).field, ConeSide::Inside, p),
      p);
  for (auto _ : state) benchmark::DoNotOptimize(solver::solve_u2(u1, p, cfg));
}
BENCHMARK(bm_solve_u2)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void bm_reduced_operator_build(benchmark::State& state) {
  const Grid grid = grid_for(static_cast<int>(state.range(0)));
  const SymbolParams p = params();
  const solver::SolverConfig cfg;
  const Field zs = project_cone(
      symmetrize(lumps::sample_lump(grid, 1, Frame::KPScaled, p).field), ConeSide::Inside, p);
  for (auto _ : state) benchmark::DoNotOptimize(solver::ReducedOperator(zs, p, cfg));
}
BENCHMARK(bm_reduced_operator_build)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void bm_jacobian_apply(benchmark::State& state) {
  const Grid grid = grid_for(static_cast<int>(state.range(0)));
  const SymbolParams p = params();
  const solver::SolverConfig cfg;
  const Field zs = project_cone(
      symmetrize(lumps::sample_lump(grid, 1, Frame::KPScaled, p).field), ConeSide::Inside, p);
  const solver::ReducedOperator op(zs, p, cfg);
  const Field w =
      project_cone(symmetrize(random_field(grid, Frame::KPScaled, 5, 1.0)), ConeSide::Inside, p);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(w));
}
BENCHMARK(bm_jacobian_apply)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void bm_lump_sampling(benchmark::State& state) {
  const Grid grid = grid_for(256);
  const SymbolParams p = params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lumps::sample_lump(grid, 2, Frame::KPScaled, p));
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(bm_lump_sampling)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
