#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mediadisc/corpus.hpp"

namespace mediadisc {

// A contiguous run of two or three normalized tokens.
class NGram {
 public:
  NGram() = default;
  // Throws std::invalid_argument unless 2 <= tokens.size() <= 3.
  explicit NGram(std::vector<std::string> tokens);
  NGram(std::string a, std::string b);
  NGram(std::string a, std::string b, std::string c);

  // Splits on single spaces; returns std::nullopt for a bad arity.
  static std::optional<NGram> from_string(std::string_view joined);

  std::size_t arity() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  // Tokens joined by single spaces; this is also the sort key.
  const std::string& str() const { return joined_; }

  bool operator==(const NGram& other) const { return joined_ == other.joined_; }
  std::strong_ordering operator<=>(const NGram& other) const { return joined_ <=> other.joined_; }

 private:
  std::vector<std::string> tokens_;
  std::string joined_;
};

struct NGramHash {
  std::size_t operator()(const NGram& g) const noexcept { return std::hash<std::string>{}(g.str()); }
};

// All contiguous windows of `arity` (2 or 3) in order.
std::vector<NGram> extract_ngrams(std::span<const std::string> tokens, std::size_t arity);

// ---------------------------------------------------------------------------

enum class Topic { ForeignAffairs, DomesticPolitics, EconomicIssue, SocialIssue };

inline constexpr std::array<Topic, 4> kAllTopics = {Topic::ForeignAffairs, Topic::DomesticPolitics,
                                                    Topic::EconomicIssue, Topic::SocialIssue};

// The short keys used in lexicon files, directory names, and CSVs:
// foreign, domestic, economic, social.
std::string_view topic_key(Topic topic);
std::string_view topic_title(Topic topic);
std::optional<Topic> parse_topic(std::string_view key);

// ---------------------------------------------------------------------------

using BigramCounts = std::unordered_map<NGram, std::uint64_t, NGramHash>;

struct MiningReport {
  std::uint64_t threshold = 100;
  // candidate -> (year -> count), every year in which the bigram occurs.
  std::map<NGram, std::map<int, std::uint64_t>> candidates;

  std::uint64_t total(const NGram& bigram) const;
  // Candidates by descending total frequency, ties lexicographic.
  std::vector<NGram> ranked() const;
};

// Per-year bigram counts; merging shards is associative and commutative.
class BigramCounter {
 public:
  void add(const Headline& headline);
  void merge(const BigramCounter& other);
  const std::map<int, BigramCounts>& by_year() const { return by_year_; }

 private:
  std::map<int, BigramCounts> by_year_;
};

// A bigram is a candidate when its count reaches `per_year_threshold` in at
// least one year. Throws std::invalid_argument for a zero threshold.
MiningReport mine_frequent_bigrams(std::span<const Headline> headlines, std::uint64_t per_year_threshold = 100,
                                   std::size_t jobs = 1);

// ---------------------------------------------------------------------------

class TopicLexicon {
 public:
  // Throws ConfigError if `bigram` is already mapped to another topic.
  // Returns false for an exact duplicate.
  bool add(const NGram& bigram, Topic topic);

  std::optional<Topic> find(const NGram& bigram) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t count(Topic topic) const;
  const std::map<NGram, Topic>& entries() const { return entries_; }

 private:
  std::map<NGram, Topic> entries_;
};

struct LexiconLoadReport {
  std::size_t unlabeled = 0;      // rows with a blank topic (an unfilled skeleton line)
  std::size_t duplicates = 0;     // exact repeats, deduplicated
};

// Lines are `token token<TAB>topic`; `#` comment lines and blank lines are
// ignored. The bigram text goes through `preprocessor` and must come out as
// exactly two tokens. Throws ConfigError on unknown topics, conflicting
// duplicates (naming both line numbers), or entries that do not normalize to
// a bigram.
TopicLexicon load_lexicon(std::istream& in, const Preprocessor& preprocessor,
                          LexiconLoadReport* report = nullptr);

// ---------------------------------------------------------------------------

enum class SelectionMode {
  AllMatches,  // a headline joins every topic it has a lexicon bigram for
  FirstMatch,  // only the topic of its first lexicon bigram
};

struct Selection {
  std::map<Topic, std::vector<Headline>> buckets;
  std::size_t selected = 0;     // distinct headlines in at least one bucket
  std::size_t multi_topic = 0;  // headlines matching more than one topic
};

Selection select_relevant(std::span<const Headline> headlines, const TopicLexicon& lexicon,
                          SelectionMode mode = SelectionMode::AllMatches);

}  // namespace mediadisc
