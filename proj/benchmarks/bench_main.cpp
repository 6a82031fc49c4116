#include <benchmark/benchmark.h>

#include <array>
#include <cmath>

#include "cubiclab/exp_sums.hpp"
#include "cubiclab/forms.hpp"
#include "cubiclab/lattice_enum.hpp"
#include "cubiclab/singular_integral.hpp"

namespace {

using namespace cubiclab;

CubicForm taxicab() { return CubicForm::diagonal({1, 1, -1, -1}); }

void BM_EnumerateDirect(benchmark::State& state) {
  const auto C = taxicab();
  const double P = static_cast<double>(state.range(0));
  std::size_t zeros = 0;
  for (auto _ : state) {
    auto z = enumerate_zeros(C, P, Strategy::direct);
    zeros = z.size();
    benchmark::DoNotOptimize(z.data());
  }
  state.counters["zeros"] = static_cast<double>(zeros);
}
BENCHMARK(BM_EnumerateDirect)->Arg(20)->Arg(40)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_EnumerateMeetInMiddle(benchmark::State& state) {
  const auto C = taxicab();
  const double P = static_cast<double>(state.range(0));
  std::size_t zeros = 0;
  for (auto _ : state) {
    auto z = enumerate_zeros(C, P, Strategy::meet_in_middle);
    zeros = z.size();
    benchmark::DoNotOptimize(z.data());
  }
  state.counters["zeros"] = static_cast<double>(zeros);
}
BENCHMARK(BM_EnumerateMeetInMiddle)->Arg(20)->Arg(40)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_CompleteSum(benchmark::State& state) {
  const auto C = CubicForm::diagonal({1, 1, 1});
  const std::int64_t q = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(complete_sum(C, q, 1, {1, 2, 3}).value.real());
}
BENCHMARK(BM_CompleteSum)->Arg(36)->Arg(60)->Arg(210);

void BM_CompleteSumCrt(benchmark::State& state) {
  const auto C = CubicForm::diagonal({1, 1, 1});
  const std::int64_t q = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(complete_sum_crt(C, q, 1, {1, 2, 3}).value.real());
}
BENCHMARK(BM_CompleteSumCrt)->Arg(36)->Arg(60)->Arg(210);

void BM_OscillatoryIntegral(benchmark::State& state) {
  const auto C = taxicab();
  const std::array<double, 4> gamma{0.5, -0.25, 1.0, 0.0};
  const double gamma0 = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(osc_integral_I(C, gamma0, gamma, 1e-8).value.real());
}
BENCHMARK(BM_OscillatoryIntegral)->Arg(1)->Arg(10)->Arg(100);

void BM_SchmidtIL(benchmark::State& state) {
  const auto C = taxicab();
  const auto samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(schmidt_IL(C, std::nullopt, 8.0, samples, 7).value);
}
BENCHMARK(BM_SchmidtIL)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
