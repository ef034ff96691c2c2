#include "mediadisc/lexicon.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "mediadisc/error.hpp"
#include "mediadisc/log.hpp"

namespace mediadisc {

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

NGram::NGram(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.size() < 2 || tokens_.size() > 3) {
    throw std::invalid_argument(fmt::format("n-gram arity must be 2 or 3, got {}", tokens_.size()));
  }
  joined_ = join_tokens(tokens_);
}

NGram::NGram(std::string a, std::string b) : NGram(std::vector<std::string>{std::move(a), std::move(b)}) {}

NGram::NGram(std::string a, std::string b, std::string c)
    : NGram(std::vector<std::string>{std::move(a), std::move(b), std::move(c)}) {}

std::optional<NGram> NGram::from_string(std::string_view joined) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= joined.size()) {
    const auto space = joined.find(' ', start);
    const auto end = space == std::string_view::npos ? joined.size() : space;
    if (end == start) return std::nullopt;
    tokens.emplace_back(joined.substr(start, end - start));
    if (space == std::string_view::npos) break;
    start = space + 1;
  }
  if (tokens.size() < 2 || tokens.size() > 3) return std::nullopt;
  return NGram(std::move(tokens));
}

std::vector<NGram> extract_ngrams(std::span<const std::string> tokens, std::size_t arity) {
  if (arity < 2 || arity > 3) throw std::invalid_argument("extract_ngrams: arity must be 2 or 3");
  std::vector<NGram> out;
  if (tokens.size() < arity) return out;
  out.reserve(tokens.size() - arity + 1);
  for (std::size_t i = 0; i + arity <= tokens.size(); ++i) {
    out.emplace_back(std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                              tokens.begin() + static_cast<std::ptrdiff_t>(i + arity)));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view topic_key(Topic topic) {
  switch (topic) {
    case Topic::ForeignAffairs: return "foreign";
    case Topic::DomesticPolitics: return "domestic";
    case Topic::EconomicIssue: return "economic";
    case Topic::SocialIssue: return "social";
  }
  return "foreign";
}

std::string_view topic_title(Topic topic) {
  switch (topic) {
    case Topic::ForeignAffairs: return "Foreign affairs";
    case Topic::DomesticPolitics: return "Domestic politics";
    case Topic::EconomicIssue: return "Economic issues";
    case Topic::SocialIssue: return "Social issues";
  }
  return "";
}

std::optional<Topic> parse_topic(std::string_view key) {
  for (Topic t : kAllTopics) {
    if (topic_key(t) == key) return t;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::uint64_t MiningReport::total(const NGram& bigram) const {
  auto it = candidates.find(bigram);
  if (it == candidates.end()) return 0;
  std::uint64_t sum = 0;
  for (const auto& [year, count] : it->second) sum += count;
  return sum;
}

std::vector<NGram> MiningReport::ranked() const {
  std::vector<std::pair<std::uint64_t, NGram>> order;
  for (const auto& [gram, years] : candidates) order.emplace_back(total(gram), gram);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<NGram> out;
  for (auto& [count, gram] : order) out.push_back(std::move(gram));
  return out;
}

void BigramCounter::add(const Headline& headline) {
  auto& counts = by_year_[headline.year];
  for (auto& gram : extract_ngrams(headline.tokens, 2)) ++counts[std::move(gram)];
}

void BigramCounter::merge(const BigramCounter& other) {
  for (const auto& [year, counts] : other.by_year_) {
    auto& mine = by_year_[year];
    for (const auto& [gram, count] : counts) mine[gram] += count;
  }
}

MiningReport mine_frequent_bigrams(std::span<const Headline> headlines, std::uint64_t per_year_threshold,
                                   std::size_t jobs) {
  if (per_year_threshold < 1) throw std::invalid_argument("mining threshold must be >= 1");

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, headlines.size()));
  std::vector<BigramCounter> shards(workers);
  {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (headlines.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(headlines.size(), w * chunk);
      const std::size_t end = std::min(headlines.size(), begin + chunk);
      auto work = [&, w, begin, end] {
        for (std::size_t i = begin; i < end; ++i) shards[w].add(headlines[i]);
      };
      if (workers == 1) {
        work();
      } else {
        threads.emplace_back(work);
      }
    }
  }
  BigramCounter total;
  for (const auto& shard : shards) total.merge(shard);

  std::set<NGram> chosen;
  for (const auto& [year, counts] : total.by_year()) {
    for (const auto& [gram, count] : counts) {
      if (count >= per_year_threshold) chosen.insert(gram);
    }
  }
  MiningReport report;
  report.threshold = per_year_threshold;
  for (const auto& gram : chosen) {
    auto& per_year = report.candidates[gram];
    for (const auto& [year, counts] : total.by_year()) {
      if (auto it = counts.find(gram); it != counts.end()) per_year[year] = it->second;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

bool TopicLexicon::add(const NGram& bigram, Topic topic) {
  if (bigram.arity() != 2) {
    throw ConfigError(fmt::format("lexicon entry '{}' is not a bigram", bigram.str()));
  }
  auto [it, inserted] = entries_.emplace(bigram, topic);
  if (!inserted && it->second != topic) {
    throw ConfigError(fmt::format("lexicon: '{}' labeled both {} and {}", bigram.str(), topic_key(it->second),
                                  topic_key(topic)));
  }
  return inserted;
}

std::optional<Topic> TopicLexicon::find(const NGram& bigram) const {
  auto it = entries_.find(bigram);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::size_t TopicLexicon::count(Topic topic) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.second == topic; }));
}

TopicLexicon load_lexicon(std::istream& in, const Preprocessor& preprocessor, LexiconLoadReport* report) {
  TopicLexicon lexicon;
  LexiconLoadReport local;
  std::map<NGram, std::pair<Topic, std::size_t>> first_seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    // Search the untrimmed line: an unlabeled skeleton row ends in the tab.
    const std::string_view raw = line;
    const auto tab = raw.find('\t');
    if (tab == std::string_view::npos) {
      throw ConfigError(fmt::format("lexicon line {}: expected 'token token<TAB>topic'", line_no));
    }
    const std::string_view text = trim(raw.substr(0, tab));
    const std::string_view label = trim(raw.substr(tab + 1));
    if (label.empty()) {
      ++local.unlabeled;
      continue;
    }
    const auto topic = parse_topic(label);
    if (!topic) {
      throw ConfigError(fmt::format("lexicon line {}: unknown topic '{}' (expected foreign, domestic, "
                                    "economic, or social)",
                                    line_no, label));
    }
    auto tokens = preprocessor(text);
    if (tokens.size() != 2) {
      throw ConfigError(fmt::format("lexicon line {}: '{}' normalizes to {} token(s), expected 2", line_no, text,
                                    tokens.size()));
    }
    NGram bigram(std::move(tokens));
    if (auto it = first_seen.find(bigram); it != first_seen.end()) {
      if (it->second.first != *topic) {
        throw ConfigError(fmt::format("lexicon lines {} and {}: '{}' labeled both {} and {}", it->second.second,
                                      line_no, bigram.str(), topic_key(it->second.first), topic_key(*topic)));
      }
      log::warn(fmt::format("lexicon line {}: duplicate of line {} ('{}'), ignored", line_no, it->second.second,
                            bigram.str()));
      ++local.duplicates;
      continue;
    }
    first_seen.emplace(bigram, std::make_pair(*topic, line_no));
    lexicon.add(bigram, *topic);
  }
  if (report) *report = local;
  return lexicon;
}

Selection select_relevant(std::span<const Headline> headlines, const TopicLexicon& lexicon, SelectionMode mode) {
  Selection out;
  for (const auto& headline : headlines) {
    std::vector<Topic> matched;
    for (const auto& gram : extract_ngrams(headline.tokens, 2)) {
      const auto topic = lexicon.find(gram);
      if (!topic) continue;
      if (std::find(matched.begin(), matched.end(), *topic) == matched.end()) matched.push_back(*topic);
      if (mode == SelectionMode::FirstMatch) break;
    }
    if (matched.empty()) continue;
    ++out.selected;
    if (matched.size() > 1) ++out.multi_topic;
    for (Topic t : matched) out.buckets[t].push_back(headline);
  }
  return out;
}

}  // namespace mediadisc
