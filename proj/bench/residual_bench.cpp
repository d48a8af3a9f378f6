// Serial vs OpenMP grid residual on the explicit solution.
#include <benchmark/benchmark.h>

#include "wavesym/detsys.hpp"
#include "wavesym/verify.hpp"

using namespace wavesym;

namespace {

struct Setup {
  ParamValues p = explicit_params();
  Field u = explicit_solution(p).u;
  ScalarFn f = numeric_f(FFamily::exponential(), p);
};

GridSpec grid(int n) {
  GridSpec g;
  g.n = {n, n, n};
  return g;
}

void BM_serial(benchmark::State& st) {
  Setup s;
  const GridSpec g = grid(int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fd_residual_serial(s.u, g, s.f).max_residual);
  st.SetItemsProcessed(st.iterations() * std::int64_t(g.points()));
}

void BM_openmp(benchmark::State& st) {
  Setup s;
  const GridSpec g = grid(int(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(fd_residual(s.u, g, s.f).max_residual);
  st.SetItemsProcessed(st.iterations() * std::int64_t(g.points()));
}

}  // namespace

BENCHMARK(BM_serial)->Arg(21)->Arg(41)->Arg(61)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_openmp)->Arg(21)->Arg(41)->Arg(61)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
