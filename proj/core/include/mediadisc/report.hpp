#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mediadisc/ca.hpp"
#include "mediadisc/corpus.hpp"
#include "mediadisc/lexicon.hpp"
#include "mediadisc/metrics.hpp"
#include "mediadisc/tabulate.hpp"

namespace mediadisc {

struct TopKScope {
  Topic topic = Topic::ForeignAffairs;
  int year = 0;
  std::optional<std::string> outlet;  // std::nullopt = all outlets

  std::string label() const;
};

struct TopKTable {
  TopKScope scope;
  // Non-increasing counts; ties ordered by the space-joined n-gram.
  std::vector<std::pair<NGram, std::uint64_t>> rows;
};

// The k most frequent bigrams and trigrams among the bucket's headlines that
// fall in `scope` (year, and outlet when set). Counting matches the table
// builder. Throws std::invalid_argument for k == 0.
TopKTable top_k(std::span<const Headline> bucket, const TopKScope& scope, std::size_t k = 10,
                CountingMode mode = CountingMode::Occurrences);

// ---------------------------------------------------------------------------

struct PlotOptions {
  double width = 800.0;
  double height = 600.0;
  std::string title;
};

// One marker and one text label per outlet. Marker shape encodes leaning:
// circle (left), square (central), triangle (right); outlets without a
// configured leaning get a diamond. Axes span the data with a 10% margin.
std::string render_scatter(const CaEmbedding& emb, std::span<const OutletInfo> outlets,
                           const PlotOptions& options = {});

// Line chart over years. Consecutive present values are joined by a
// polyline; gaps break the line; every present value gets a marker; one
// legend entry per series. Throws std::invalid_argument when no series has a
// present value.
std::string render_series(std::span<const DiscrepancySeries> series, const PlotOptions& options = {});

// ---------------------------------------------------------------------------

struct Highlight {
  std::string category;
  std::string color;
};

// `ngram<TAB>category<TAB>color` lines; `#` comments ignored.
using Annotations = std::map<std::string, Highlight>;
Annotations load_annotations(std::istream& in);

// Pipe table with one column per scope and one row per rank. Highlighted
// n-grams are wrapped in a colored span. Empty input renders as "".
std::string render_markdown(std::span<const TopKTable> tables, const Annotations* annotations = nullptr);

}  // namespace mediadisc
