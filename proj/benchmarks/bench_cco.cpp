// Timing mirrors for the cost and gradient kernels and the solver stages.
// Counters report problem size so runs at different n can be compared.
#include <benchmark/benchmark.h>

#include "ccolap/cco.hpp"
#include "ccolap/datasets.hpp"
#include "ccolap/jade.hpp"
#include "ccolap/laplacian.hpp"
#include "ccolap/rng.hpp"

using namespace ccolap;

namespace {

CcoProblem sized_problem(int n) {
  const auto [l1, l2] = gen_random_laplacian_pair(n, 7000 + n);
  return make_problem(l1, l2, PatternMode::own, 1e6);
}

void annotate(benchmark::State& state, const CcoProblem& p) {
  state.counters["n"] = p.l1.n();
  state.counters["m1"] = static_cast<double>(p.pattern1.size());
  state.counters["m2"] = static_cast<double>(p.pattern2.size());
}

void bm_cost(benchmark::State& state) {
  const CcoProblem p = sized_problem(static_cast<int>(state.range(0)));
  const Eigen::VectorXd u1 = initial_weights_1(p);
  const Eigen::VectorXd u2 = initial_weights_2(p);
  for (auto _ : state)
    benchmark::DoNotOptimize(cco_cost(p, u1, u2).total);
  annotate(state, p);
}

void bm_gradient(benchmark::State& state) {
  const CcoProblem p = sized_problem(static_cast<int>(state.range(0)));
  const Eigen::VectorXd u1 = initial_weights_1(p);
  const Eigen::VectorXd u2 = initial_weights_2(p);
  for (auto _ : state) {
    auto [g1, g2] = cco_gradient(p, u1, u2);
    benchmark::DoNotOptimize(g1);
    benchmark::DoNotOptimize(g2);
  }
  annotate(state, p);
}

void bm_solve(benchmark::State& state) {
  const CcoProblem p = sized_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const CcoResult r = cco_solve(p);
    benchmark::DoNotOptimize(r.commutator_frob);
    state.counters["iterations"] = r.iterations;
  }
  annotate(state, p);
}

void bm_jade(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto [l1, l2] = gen_random_laplacian_pair(n, 7000 + n);
  for (auto _ : state)
    benchmark::DoNotOptimize(jade(l1.m, l2.m).residual);
  state.counters["n"] = n;
}

}  // namespace

BENCHMARK(bm_cost)->Arg(10)->Arg(20)->Arg(40)->Arg(80)->Arg(160)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_gradient)->Arg(10)->Arg(20)->Arg(40)->Arg(80)->Arg(160)
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_jade)->Arg(10)->Arg(20)->Arg(40)->Arg(80)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_solve)->Arg(10)->Arg(20)->Arg(40)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
