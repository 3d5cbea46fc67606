// Serial reference vs OpenMP kernel, pairwise on identical inputs.

#include <benchmark/benchmark.h>

#include "hdef/eval.hpp"
#include "hdef/ffield.hpp"
#include "hdef/residue.hpp"
#include "hdef/uniform.hpp"

namespace {

using namespace hdef;

FqPoly quadratic(const FieldPtr& F) {
  // first rootless square-free monic quadratic
  return rootless_squarefree_monic(2, F).front();
}

void BM_ProductCover_Serial(benchmark::State& st) {
  const auto F = field_of_order(static_cast<std::uint64_t>(st.range(0)));
  const FqPoly f = quadratic(F);
  for (auto _ : st) benchmark::DoNotOptimize(serial::product_cover_check(f, F));
}

void BM_ProductCover_OpenMP(benchmark::State& st) {
  const auto F = field_of_order(static_cast<std::uint64_t>(st.range(0)));
  const FqPoly f = quadratic(F);
  for (auto _ : st) benchmark::DoNotOptimize(product_cover_check(f, F));
}

void BM_SweepQuadratics_Serial(benchmark::State& st) {
  const auto q = static_cast<std::uint32_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(serial::sweep_quadratics(q).failures.size());
}

void BM_SweepQuadratics_OpenMP(benchmark::State& st) {
  const auto q = static_cast<std::uint32_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sweep_quadratics(q).failures.size());
}

void BM_UnionDensity_Serial(benchmark::State& st) {
  const auto X = static_cast<std::uint64_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(serial::union_density(7, X).covered);
}

void BM_UnionDensity_OpenMP(benchmark::State& st) {
  const auto X = static_cast<std::uint64_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(union_density(7, X).covered);
}

SamplePlan finite_plan() {
  SamplePlan plan;
  plan.val_lo = -4;
  plan.val_hi = 7;
  return plan;
}

void BM_VerifyFinite_Serial(benchmark::State& st) {
  const auto q = static_cast<std::uint64_t>(st.range(0));
  const auto K = LocalField::laurent(field_of_order(q), 8);
  const auto spec = FormulaSpec::make_finite(q);
  for (auto _ : st) benchmark::DoNotOptimize(serial::verify_definition(spec, K, finite_plan()).failures);
}

void BM_VerifyFinite_OpenMP(benchmark::State& st) {
  const auto q = static_cast<std::uint64_t>(st.range(0));
  const auto K = LocalField::laurent(field_of_order(q), 8);
  const auto spec = FormulaSpec::make_finite(q);
  for (auto _ : st) benchmark::DoNotOptimize(verify_definition(spec, K, finite_plan()).failures);
}

}  // namespace

BENCHMARK(BM_ProductCover_Serial)->Arg(127)->Arg(1021)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ProductCover_OpenMP)->Arg(127)->Arg(1021)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SweepQuadratics_Serial)->Arg(83)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepQuadratics_OpenMP)->Arg(83)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UnionDensity_Serial)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UnionDensity_OpenMP)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyFinite_Serial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyFinite_OpenMP)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
