#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mediadisc/corpus.hpp"

namespace mediadisc {

// Small portable PRNG wrapper. The standard distributions are
// implementation-defined, so fixtures draw through these helpers to stay
// identical across standard libraries.
class FixtureRng {
 public:
  explicit FixtureRng(std::uint64_t seed);

  std::uint64_t next();
  // Uniform in [0, 1).
  double uniform();
  // Uniform in [0, n).
  std::size_t below(std::size_t n);
  // Index drawn proportionally to `weights` (all >= 0, sum > 0).
  std::size_t weighted(const std::vector<double>& weights);

 private:
  std::uint64_t state_;
};

// The nine outlets the pipeline was designed around, with their leanings.
std::vector<OutletInfo> default_outlets();

struct SyntheticCorpusOptions {
  std::uint64_t seed = 7;
  std::size_t headlines = 10000;
  int first_year = 2014;
  int last_year = 2022;
  // Share of headlines with no topic phrase at all.
  double off_topic_fraction = 0.2;
};

struct SyntheticCorpus {
  std::vector<OutletInfo> outlets;
  std::vector<RawRecord> records;
  // Lexicon TSV covering the planted topic phrases, in raw surface form.
  std::string lexicon_tsv;
};

// Headlines mixing one planted topic phrase (with outlet-specific phrase
// preferences) and generic filler words, with varied casing and
// punctuation. Deterministic for a given options value.
SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusOptions& options = {});

}  // namespace mediadisc
