#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mediadisc/corpus.hpp"
#include "mediadisc/lexicon.hpp"

namespace mediadisc {

// One analysis unit: the headlines of a single topic in a single year.
struct UnitId {
  Topic topic = Topic::ForeignAffairs;
  int year = 0;

  auto operator<=>(const UnitId&) const = default;
  // "<topic>_<year>", e.g. "domestic_2018".
  std::string str() const;
};

enum class CountingMode {
  Occurrences,  // every occurrence counts, repeats within a headline included
  Headlines,    // at most one per headline
};

std::string_view to_string(CountingMode mode);
std::optional<CountingMode> parse_counting_mode(std::string_view text);

using NGramCounts = std::map<NGram, std::uint64_t>;

// Bigram and trigram frequencies over `headlines`. This is the single
// counting routine shared by table construction and top-k reporting.
NGramCounts count_ngrams(std::span<const Headline> headlines, CountingMode mode = CountingMode::Occurrences);

// Outlet x n-gram frequency table. Rows are n-grams, columns are outlets;
// counts are stored row-major.
class ContingencyTable {
 public:
  ContingencyTable() = default;
  // Throws std::invalid_argument when `counts` is not rows x columns.
  ContingencyTable(UnitId unit, std::vector<std::string> columns, std::vector<NGram> rows,
                   std::vector<std::uint64_t> counts);

  const UnitId& unit() const { return unit_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<NGram>& rows() const { return rows_; }
  std::size_t row_count() const { return rows_.size(); }
  std::size_t column_count() const { return columns_.size(); }
  std::uint64_t at(std::size_t row, std::size_t col) const { return counts_[row * columns_.size() + col]; }
  std::span<const std::uint64_t> counts() const { return counts_; }

  std::uint64_t grand_total() const;
  std::vector<std::uint64_t> row_totals() const;
  std::vector<std::uint64_t> column_totals() const;

  // At least 2 rows, 3 columns, and a positive total.
  bool is_analyzable() const;

  // Table dump: header `ngram,<outlet>...`, one row per n-gram.
  void write_csv(std::ostream& out) const;
  // Throws DataError on malformed content.
  static ContingencyTable read_csv(std::istream& in, UnitId unit);

  bool operator==(const ContingencyTable&) const = default;

 private:
  UnitId unit_;
  std::vector<std::string> columns_;
  std::vector<NGram> rows_;
  std::vector<std::uint64_t> counts_;
};

struct TableOptions {
  // A row is retained when some outlet's count is strictly greater.
  std::uint64_t inclusion_threshold = 50;
  CountingMode counting = CountingMode::Occurrences;
};

struct TableResult {
  ContingencyTable table;            // retained rows and surviving columns
  std::vector<std::string> dropped_columns;
  bool degenerate = false;
  std::string reason;                // set when degenerate
};

// Builds the unit's table. Columns follow `outlets` order, minus outlets
// without any retained n-gram; rows sort by descending total then
// lexicographically. Throws std::invalid_argument for a zero threshold.
TableResult build_table(std::span<const Headline> bucket, UnitId unit, std::span<const std::string> outlets,
                        const TableOptions& options = {});

}  // namespace mediadisc
