#include <benchmark/benchmark.h>

#include "mediadisc/svd.hpp"
#include "mediadisc/synthetic.hpp"

namespace {

mediadisc::Matrix random_matrix(std::size_t rows, std::size_t cols) {
  mediadisc::FixtureRng rng(rows * 31 + cols);
  mediadisc::Matrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = 2.0 * rng.uniform() - 1.0;
  }
  return a;
}

void BM_Svd(benchmark::State& state) {
  const auto a = random_matrix(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(mediadisc::svd(a));
}
BENCHMARK(BM_Svd)->Args({50, 9})->Args({300, 9})->Args({2000, 9})->Args({300, 30});

}  // namespace
