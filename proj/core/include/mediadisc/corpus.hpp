#pragma once

#include <compare>
#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mediadisc/lemmatizer.hpp"

namespace mediadisc {

// ---------------------------------------------------------------------------
// Outlets
// ---------------------------------------------------------------------------

enum class Leaning { Left, Central, Right };

std::string_view to_string(Leaning leaning);
std::optional<Leaning> parse_leaning(std::string_view text);

struct OutletInfo {
  std::string name;
  Leaning leaning = Leaning::Central;

  bool operator==(const OutletInfo&) const = default;
};

// Accepts either a JSON array of {"name", "leaning"} objects or an object
// with an "outlets" array of the same. Order is preserved; it becomes the
// column order of every contingency table. Throws ConfigError on duplicate
// names or an unknown leaning.
std::vector<OutletInfo> load_outlets(std::istream& in);

// ---------------------------------------------------------------------------
// Raw records
// ---------------------------------------------------------------------------

struct Date {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  // Strict `YYYY-MM-DD` with a valid calendar day.
  static std::optional<Date> parse(std::string_view text);
  std::string iso() const;

  auto operator<=>(const Date&) const = default;
};

struct DateRange {
  Date first{2014, 1, 1};
  Date last{2022, 9, 30};

  bool contains(const Date& d) const { return first <= d && d <= last; }
};

struct RawRecord {
  std::string outlet;
  Date date;
  std::string title;

  bool operator==(const RawRecord&) const = default;
};

enum class InputFormat { JsonLines, Csv };

std::optional<InputFormat> format_from_path(std::string_view path);

struct IngestOptions {
  DateRange range;
  // Fatal when skipped / rows seen exceeds this fraction.
  double max_skip_fraction = 0.01;
};

struct SkippedRow {
  std::size_t line = 0;
  std::string reason;
};

struct IngestResult {
  std::vector<RawRecord> records;
  std::vector<SkippedRow> skipped;
  // Well-formed rows whose date falls outside the configured range. These
  // are filtered, not counted against the skip limit.
  std::size_t out_of_range = 0;

  std::size_t rows_seen() const { return records.size() + skipped.size() + out_of_range; }
};

// One RawRecord per well-formed row in input order. Malformed rows are
// skipped and logged with their line number; throws DataError when the
// stream is unreadable or the skip fraction exceeds the configured limit.
IngestResult ingest(std::istream& in, InputFormat format, const IngestOptions& options = {});

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

using Stoplist = std::unordered_set<std::string>;

// One token per line; blank lines and `#` comments ignored; entries are
// lowercased.
Stoplist load_stoplist(std::istream& in);
const Stoplist& default_stoplist();

// Lowercases, splits on anything that is not a letter, digit, or apostrophe,
// strips apostrophes from token edges, and drops empty fragments. Non-ASCII
// code points outside the punctuation and space blocks count as letters;
// U+2018/U+2019 are treated as apostrophes.
std::vector<std::string> tokenize(std::string_view title);

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens, const Stoplist& stoplist);

// The full title -> token pipeline: tokenize, drop stopwords, lemmatize, and
// drop any token that lemmatized into a stopword.
class Preprocessor {
 public:
  Preprocessor() : Preprocessor(default_stoplist(), LemmaRules::defaults()) {}
  Preprocessor(Stoplist stoplist, LemmaRules rules)
      : stoplist_(std::move(stoplist)), rules_(std::move(rules)) {}

  std::vector<std::string> operator()(std::string_view title) const;

  const Stoplist& stoplist() const { return stoplist_; }
  const LemmaRules& rules() const { return rules_; }

 private:
  Stoplist stoplist_;
  LemmaRules rules_;
};

struct Headline {
  std::string outlet;
  int year = 0;
  std::vector<std::string> tokens;

  bool operator==(const Headline&) const = default;
};

struct BuildResult {
  std::vector<Headline> headlines;
  std::size_t dropped_empty = 0;
};

// Applies the preprocessor to every record. Output preserves input order
// regardless of `jobs`. Throws ConfigError naming every record outlet that is
// missing from `outlets`.
BuildResult build_headlines(std::span<const RawRecord> records, std::span<const OutletInfo> outlets,
                            const Preprocessor& preprocessor, std::size_t jobs = 1);

}  // namespace mediadisc
