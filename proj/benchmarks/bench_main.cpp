#include <benchmark/benchmark.h>

#include "gptlab/composites.hpp"
#include "gptlab/discrimination.hpp"
#include "gptlab/lp.hpp"
#include "gptlab/models.hpp"
#include "gptlab/polytope.hpp"
#include "gptlab/sampling.hpp"

using namespace gptlab;

namespace {

// Random bounded LP: maximize c.x over Ax <= b, 0 <= x <= 1.
void BM_LpRandom(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Rng rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto prog = lp::LinearProgram::with_variables(n);
  prog.le_matrix.resize(n, n);
  prog.le_rhs.resize(n);
  for (int i = 0; i < n; ++i) {
    prog.objective[i] = u(rng);
    prog.upper[i] = 1.0;
    prog.le_rhs[i] = 1.0 + std::abs(u(rng));
    for (int j = 0; j < n; ++j) prog.le_matrix(i, j) = u(rng);
  }
  for (auto _ : st) benchmark::DoNotOptimize(lp::solve(prog));
}
BENCHMARK(BM_LpRandom)->Arg(8)->Arg(32)->Arg(64);

void BM_MaxTensorSquares(benchmark::State& st) {
  const auto sq = models::square_gbit();
  std::vector<Vector> v;
  for (const auto& x : sq.extreme_points()) v.push_back(x.coords);
  polytope::DdOptions dd;
  dd.exact = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(polytope::max_tensor_vertices(v, v, dd));
}
BENCHMARK(BM_MaxTensorSquares)->Arg(0)->Arg(1);

void BM_FacetsOfSimplex(benchmark::State& st) {
  const auto s = models::classical(static_cast<int>(st.range(0)));
  std::vector<Vector> v;
  for (const auto& x : s.extreme_points()) v.push_back(x.coords);
  for (auto _ : st) benchmark::DoNotOptimize(polytope::facet_functionals(v));
}
BENCHMARK(BM_FacetsOfSimplex)->Arg(4)->Arg(8);

void BM_CapacityClassical(benchmark::State& st) {
  const auto s = models::classical(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(capacity(s));
}
BENCHMARK(BM_CapacityClassical)->Arg(3)->Arg(6);

void BM_CapacitySquareComposite(benchmark::State& st) {
  const auto sq = models::square_gbit();
  const auto c = compose(sq, sq, st.range(0) ? CompositionRule::MaxTensor : CompositionRule::MinTensor);
  for (auto _ : st) benchmark::DoNotOptimize(capacity(c.space));
}
BENCHMARK(BM_CapacitySquareComposite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DistinguishQubit(benchmark::State& st) {
  const auto q = models::quantum(2);
  Rng rng(3);
  const auto a = random_pure_state(q, rng);
  for (auto _ : st) benchmark::DoNotOptimize(decide_distinguishable(q, {a, random_pure_state(q, rng)}));
}
BENCHMARK(BM_DistinguishQubit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
