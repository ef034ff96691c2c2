#include <benchmark/benchmark.h>

#include "mediadisc/ca.hpp"
#include "mediadisc/synthetic.hpp"

namespace {

// Rows x 9 outlets with counts in [1, 200].
mediadisc::ContingencyTable random_table(std::size_t rows) {
  mediadisc::FixtureRng rng(rows);
  std::vector<std::string> outlets;
  for (int j = 1; j <= 9; ++j) outlets.push_back("o" + std::to_string(j));
  std::vector<mediadisc::NGram> grams;
  std::vector<std::uint64_t> counts;
  for (std::size_t i = 0; i < rows; ++i) {
    grams.emplace_back("w" + std::to_string(i), "x");
    for (std::size_t j = 0; j < outlets.size(); ++j) counts.push_back(1 + rng.below(200));
  }
  return {{mediadisc::Topic::EconomicIssue, 2020}, outlets, grams, counts};
}

void BM_CaEmbed(benchmark::State& state) {
  const auto table = random_table(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mediadisc::ca_embed(table));
}
BENCHMARK(BM_CaEmbed)->Arg(20)->Arg(200)->Arg(800);

}  // namespace
