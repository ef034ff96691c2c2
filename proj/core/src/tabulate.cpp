#include "mediadisc/tabulate.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "mediadisc/csv.hpp"
#include "mediadisc/error.hpp"
#include "mediadisc/log.hpp"

namespace mediadisc {

std::string UnitId::str() const { return fmt::format("{}_{}", topic_key(topic), year); }

std::string_view to_string(CountingMode mode) {
  return mode == CountingMode::Occurrences ? "occurrences" : "headlines";
}

std::optional<CountingMode> parse_counting_mode(std::string_view text) {
  if (text == "occurrences") return CountingMode::Occurrences;
  if (text == "headlines") return CountingMode::Headlines;
  return std::nullopt;
}

NGramCounts count_ngrams(std::span<const Headline> headlines, CountingMode mode) {
  NGramCounts counts;
  for (const auto& headline : headlines) {
    std::set<NGram> seen;
    for (std::size_t arity : {2u, 3u}) {
      for (auto& gram : extract_ngrams(headline.tokens, arity)) {
        if (mode == CountingMode::Headlines && !seen.insert(gram).second) continue;
        ++counts[std::move(gram)];
      }
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------

ContingencyTable::ContingencyTable(UnitId unit, std::vector<std::string> columns, std::vector<NGram> rows,
                                   std::vector<std::uint64_t> counts)
    : unit_(unit), columns_(std::move(columns)), rows_(std::move(rows)), counts_(std::move(counts)) {
  if (counts_.size() != rows_.size() * columns_.size()) {
    throw std::invalid_argument(fmt::format("contingency table: {} cells for {}x{}", counts_.size(), rows_.size(),
                                            columns_.size()));
  }
}

std::uint64_t ContingencyTable::grand_total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::vector<std::uint64_t> ContingencyTable::row_totals() const {
  std::vector<std::uint64_t> out(rows_.size(), 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (std::size_t j = 0; j < columns_.size(); ++j) out[i] += at(i, j);
  }
  return out;
}

std::vector<std::uint64_t> ContingencyTable::column_totals() const {
  std::vector<std::uint64_t> out(columns_.size(), 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (std::size_t j = 0; j < columns_.size(); ++j) out[j] += at(i, j);
  }
  return out;
}

bool ContingencyTable::is_analyzable() const {
  return rows_.size() >= 2 && columns_.size() >= 3 && grand_total() > 0;
}

void ContingencyTable::write_csv(std::ostream& out) const {
  std::vector<std::string> header{"ngram"};
  header.insert(header.end(), columns_.begin(), columns_.end());
  out << csv::join(header) << '\n';
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    out << csv::quote(rows_[i].str());
    for (std::size_t j = 0; j < columns_.size(); ++j) out << ',' << at(i, j);
    out << '\n';
  }
}

ContingencyTable ContingencyTable::read_csv(std::istream& in, UnitId unit) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->malformed || header->fields.empty() || header->fields[0] != "ngram") {
    throw DataError(fmt::format("{} table: missing 'ngram,...' header", unit.str()));
  }
  std::vector<std::string> columns(header->fields.begin() + 1, header->fields.end());
  std::vector<NGram> rows;
  std::vector<std::uint64_t> counts;
  while (auto rec = reader.next()) {
    if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
    if (rec->malformed || rec->fields.size() != columns.size() + 1) {
      throw DataError(fmt::format("{} table line {}: expected {} fields", unit.str(), rec->line, columns.size() + 1));
    }
    auto gram = NGram::from_string(rec->fields[0]);
    if (!gram) throw DataError(fmt::format("{} table line {}: bad n-gram '{}'", unit.str(), rec->line, rec->fields[0]));
    rows.push_back(std::move(*gram));
    for (std::size_t j = 1; j < rec->fields.size(); ++j) {
      const std::string& f = rec->fields[j];
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw DataError(fmt::format("{} table line {}: bad count '{}'", unit.str(), rec->line, f));
      }
      counts.push_back(v);
    }
  }
  return ContingencyTable(unit, std::move(columns), std::move(rows), std::move(counts));
}

// ---------------------------------------------------------------------------

TableResult build_table(std::span<const Headline> bucket, UnitId unit, std::span<const std::string> outlets,
                        const TableOptions& options) {
  if (options.inclusion_threshold < 1) throw std::invalid_argument("inclusion threshold must be >= 1");

  // Per-outlet counts, in configured outlet order.
  std::vector<NGramCounts> per_outlet(outlets.size());
  {
    std::map<std::string, std::vector<Headline>, std::less<>> grouped;
    for (const auto& h : bucket) grouped[h.outlet].push_back(h);
    for (std::size_t j = 0; j < outlets.size(); ++j) {
      if (auto it = grouped.find(outlets[j]); it != grouped.end()) {
        per_outlet[j] = count_ngrams(it->second, options.counting);
      }
    }
  }

  std::set<NGram> retained;
  for (const auto& counts : per_outlet) {
    for (const auto& [gram, count] : counts) {
      if (count > options.inclusion_threshold) retained.insert(gram);
    }
  }

  // Surviving columns: outlets with a nonzero count on some retained row.
  std::vector<std::size_t> kept_columns;
  TableResult result;
  for (std::size_t j = 0; j < outlets.size(); ++j) {
    const bool any = std::any_of(retained.begin(), retained.end(),
                                 [&](const NGram& g) { return per_outlet[j].contains(g); });
    if (any) {
      kept_columns.push_back(j);
    } else {
      result.dropped_columns.push_back(outlets[j]);
    }
  }
  if (!result.dropped_columns.empty() && !retained.empty()) {
    std::string names;
    for (const auto& n : result.dropped_columns) names += (names.empty() ? "" : ", ") + n;
    log::warn(fmt::format("{}: dropping outlets with no retained n-grams: {}", unit.str(), names));
  }

  std::vector<std::pair<std::uint64_t, NGram>> order;
  for (const auto& gram : retained) {
    std::uint64_t total = 0;
    for (std::size_t j : kept_columns) {
      if (auto it = per_outlet[j].find(gram); it != per_outlet[j].end()) total += it->second;
    }
    order.emplace_back(total, gram);
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<std::string> columns;
  for (std::size_t j : kept_columns) columns.push_back(outlets[j]);
  std::vector<NGram> rows;
  std::vector<std::uint64_t> counts;
  counts.reserve(order.size() * kept_columns.size());
  for (auto& [total, gram] : order) {
    for (std::size_t j : kept_columns) {
      auto it = per_outlet[j].find(gram);
      counts.push_back(it == per_outlet[j].end() ? 0 : it->second);
    }
    rows.push_back(std::move(gram));
  }
  result.table = ContingencyTable(unit, std::move(columns), std::move(rows), std::move(counts));

  if (result.table.column_count() < 3 || result.table.row_count() < 2) {
    result.degenerate = true;
    result.reason = fmt::format("{} row(s) x {} column(s) after filtering (need >= 2 x 3)",
                                result.table.row_count(), result.table.column_count());
  }
  return result;
}

}  // namespace mediadisc
