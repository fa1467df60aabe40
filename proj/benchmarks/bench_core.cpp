// Microbenchmarks for the grid operators, the cached Poisson solves and the
// norm machinery. Run manually: ./pseudomap_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "pseudomap/maps.hpp"
#include "pseudomap/norms.hpp"
#include "pseudomap/poisson.hpp"
#include "pseudomap/synthetic.hpp"

using namespace pmap;

namespace {

GridPtr grid_for(int n) { return DiscGrid::make(1.0 / n); }

ScalarField smooth_field(const GridPtr& g, unsigned seed) {
  std::mt19937 rng(seed);
  return ScalarField::sample(g, synthetic_trig(rng));
}

void BM_Gradient(benchmark::State& state) {
  auto g = grid_for(static_cast<int>(state.range(0)));
  const ScalarField f = smooth_field(g, 1);
  Eigen::ArrayXd out;
  for (auto _ : state) {
    g->apply_d(f.v, 0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * g->num_nodes());
}
BENCHMARK(BM_Gradient)->Arg(64)->Arg(128)->Arg(256);

void BM_Laplacian(benchmark::State& state) {
  auto g = grid_for(static_cast<int>(state.range(0)));
  const ScalarField f = smooth_field(g, 2);
  for (auto _ : state) {
    ScalarField lap = laplacian(f);
    benchmark::DoNotOptimize(lap.v.data());
  }
  state.SetItemsProcessed(state.iterations() * g->num_nodes());
}
BENCHMARK(BM_Laplacian)->Arg(64)->Arg(128)->Arg(256);

void BM_PoissonFactor(benchmark::State& state) {
  auto g = grid_for(static_cast<int>(state.range(0)));
  const ScalarField rhs = smooth_field(g, 3);
  for (auto _ : state) {
    PoissonSolver solver(g);  // fresh cache: measures the factorization
    ScalarField u = solver.solve_dirichlet(rhs, [](double, double) { return 0.0; });
    benchmark::DoNotOptimize(u.v.data());
  }
}
BENCHMARK(BM_PoissonFactor)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PoissonBacksolve(benchmark::State& state) {
  auto g = grid_for(static_cast<int>(state.range(0)));
  PoissonSolver solver(g);
  const ScalarField rhs = smooth_field(g, 4);
  ScalarField warm = solver.solve_dirichlet(rhs, [](double, double) { return 0.0; });
  benchmark::DoNotOptimize(warm.v.data());
  for (auto _ : state) {
    ScalarField u = solver.solve_dirichlet(rhs, [](double, double) { return 0.0; });
    benchmark::DoNotOptimize(u.v.data());
  }
}
BENCHMARK(BM_PoissonBacksolve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_MorreyNorm(benchmark::State& state) {
  auto g = grid_for(static_cast<int>(state.range(0)));
  const ScalarField f = smooth_field(g, 5);
  const BallFamily fam = BallFamily::dyadic(g);
  for (auto _ : state) {
    NormReport rep = morrey_norm(f, 4.0 / 3.0, fam);
    benchmark::DoNotOptimize(rep.value);
  }
  state.counters["balls"] = static_cast<double>(fam.balls.size());
}
BENCHMARK(BM_MorreyNorm)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Lorentz2Inf(benchmark::State& state) {
  auto g = grid_for(static_cast<int>(state.range(0)));
  const ScalarField f = smooth_field(g, 6);
  for (auto _ : state) {
    NormReport rep = lorentz_2inf(f);
    benchmark::DoNotOptimize(rep.value);
  }
}
BENCHMARK(BM_Lorentz2Inf)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ElResidual(benchmark::State& state) {
  auto g = grid_for(static_cast<int>(state.range(0)));
  std::mt19937 rng(7);
  const QuadricSpec q = QuadricSpec::pseudosphere(1, 2);
  const DiscMap m = DiscMap::sample(g, q, synthetic_constrained_map(rng, q, 0.4));
  for (auto _ : state) {
    ElResidual r = el_residual(m);
    benchmark::DoNotOptimize(r.theta_form[0].data());
  }
}
BENCHMARK(BM_ElResidual)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PicardSolve(benchmark::State& state) {
  auto g = grid_for(static_cast<int>(state.range(0)));
  SolverConfig cfg;
  for (auto _ : state) {
    auto [m, rep] = solve(boundary_s11_exact(0.6, 0.6), QuadricSpec::pseudosphere(1, 1), cfg, g);
    benchmark::DoNotOptimize(rep.final_residual);
  }
}
BENCHMARK(BM_PicardSolve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
