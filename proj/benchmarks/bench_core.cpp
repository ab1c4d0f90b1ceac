#include <benchmark/benchmark.h>

#include <cmath>

#include "glstail/bounds.hpp"
#include "glstail/fenchel.hpp"
#include "glstail/gls.hpp"
#include "glstail/moments.hpp"
#include "glstail/orlicz.hpp"

namespace {

void BM_IntegrateSemiInfinite(benchmark::State& state) {
  for (auto _ : state) {
    auto r = glstail::integrate([](double u) { return std::exp(-u * u); }, 0.0,
                                glstail::kInf, 1e-10);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_IntegrateSemiInfinite);

void BM_MomentFromTail(benchmark::State& state) {
  const glstail::TailFunction tail(glstail::StretchedExpTail{1.0, 2.0});
  const double p = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(glstail::lp_norm_from_tail(tail, p));
  }
}
BENCHMARK(BM_MomentFromTail)->Arg(2)->Arg(16)->Arg(64);

void BM_FenchelNumeric(benchmark::State& state) {
  const glstail::GeneratingFunction psi(glstail::PowerPsi{1.0, 2.0});
  double u = -2.0;
  for (auto _ : state) {
    auto r = glstail::fenchel_conjugate_numeric(psi, u);
    benchmark::DoNotOptimize(r.value);
    u = u >= 3.0 ? -2.0 : u + 0.25;
  }
}
BENCHMARK(BM_FenchelNumeric);

void BM_GlsNormClosed(benchmark::State& state) {
  const glstail::FunctionSpec spec(glstail::StretchedExp{1.0, 2.0});
  const glstail::GeneratingFunction psi(glstail::NaturalStretchedExpPsi{1.0, 2.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(glstail::gls_norm(spec, psi).norm);
  }
}
BENCHMARK(BM_GlsNormClosed);

void BM_ConditionCheck(benchmark::State& state) {
  const glstail::TailFunction tail(glstail::StretchedExpTail{1.0, 2.0});
  for (auto _ : state) {
    auto v = glstail::condition_check(tail, 2.0);
    benchmark::DoNotOptimize(v.outcome);
  }
}
BENCHMARK(BM_ConditionCheck);

}  // namespace

BENCHMARK_MAIN();
