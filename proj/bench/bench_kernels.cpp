#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "pblab/kernels.hpp"

namespace {

struct Table {
  std::size_t grid, modes;
  std::vector<double> table, coeffs, values;

  Table(std::size_t n, std::size_t g) : grid(g), modes(n), table(g * n), coeffs(n), values(g) {
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < n; ++j)
        table[i * n + j] = std::sin((j + 1.0) * (i + 1.0) * M_PI / (g + 1.0));
    for (std::size_t j = 0; j < n; ++j) coeffs[j] = 1.0 / (j + 1.0);
  }
};

void BM_SynthesizeSerial(benchmark::State& st) {
  Table t(st.range(0), 3 * st.range(0) + 1);
  for (auto _ : st) {
    pblab::kernels::serial::synthesize(t.table.data(), t.grid, t.modes, t.coeffs.data(),
                                       t.values.data());
    benchmark::DoNotOptimize(t.values.data());
  }
}

void BM_SynthesizeParallel(benchmark::State& st) {
  Table t(st.range(0), 3 * st.range(0) + 1);
  for (auto _ : st) {
    pblab::kernels::parallel::synthesize(t.table.data(), t.grid, t.modes, t.coeffs.data(),
                                         t.values.data());
    benchmark::DoNotOptimize(t.values.data());
  }
}

void BM_AnalyzeSerial(benchmark::State& st) {
  Table t(st.range(0), 3 * st.range(0) + 1);
  for (auto _ : st) {
    pblab::kernels::serial::analyze(t.table.data(), t.grid, t.modes, 0.01, t.values.data(),
                                    t.coeffs.data());
    benchmark::DoNotOptimize(t.coeffs.data());
  }
}

void BM_AnalyzeParallel(benchmark::State& st) {
  Table t(st.range(0), 3 * st.range(0) + 1);
  for (auto _ : st) {
    pblab::kernels::parallel::analyze(t.table.data(), t.grid, t.modes, 0.01, t.values.data(),
                                      t.coeffs.data());
    benchmark::DoNotOptimize(t.coeffs.data());
  }
}

}  // namespace

BENCHMARK(BM_SynthesizeSerial)->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(BM_SynthesizeParallel)->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(BM_AnalyzeSerial)->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(BM_AnalyzeParallel)->RangeMultiplier(4)->Range(16, 1024);

BENCHMARK_MAIN();
