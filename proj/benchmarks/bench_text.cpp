#include <benchmark/benchmark.h>

#include "mediadisc/corpus.hpp"
#include "mediadisc/lexicon.hpp"
#include "mediadisc/synthetic.hpp"

namespace {

const mediadisc::SyntheticCorpus& corpus() {
  static const auto c = mediadisc::generate_synthetic_corpus({.seed = 7, .headlines = 20000});
  return c;
}

void BM_Preprocess(benchmark::State& state) {
  const mediadisc::Preprocessor pre;
  const auto& records = corpus().records;
  for (auto _ : state) {
    for (const auto& r : records) benchmark::DoNotOptimize(pre(r.title));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(records.size()));
}
BENCHMARK(BM_Preprocess)->Unit(benchmark::kMillisecond);

void BM_MineBigrams(benchmark::State& state) {
  const auto hs = mediadisc::build_headlines(corpus().records, corpus().outlets, mediadisc::Preprocessor{}).headlines;
  const auto jobs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mediadisc::mine_frequent_bigrams(hs, 100, jobs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(hs.size()));
}
BENCHMARK(BM_MineBigrams)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
