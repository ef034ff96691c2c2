#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mediadisc {

// Rewrites a trailing `suffix` into `replacement` when the remaining stem is
// at least `min_stem` characters long, does not end in one of
// `blocked_endings` (tested on the whole word), and, if `stem_needs_vowel`,
// contains a vowel. With `undouble`, a doubled final consonant of the stem
// (other than l, s, z) is reduced to one when that leaves >= `min_stem`
// characters: "stopped" -> "stop". With `restore_e`, a stem that was not
// undoubled gets back a silent final "e" when its shape calls for one:
// "ruled" -> "rule", "charged" -> "charge", "announcing" -> "announce".
struct SuffixRule {
  std::string suffix;
  std::string replacement;
  std::size_t min_stem = 3;
  std::vector<std::string> blocked_endings;
  bool stem_needs_vowel = false;
  bool undouble = false;
  bool restore_e = false;
};

// The silent-e heuristic used by `restore_e`, exposed for testing.
bool needs_final_e(std::string_view stem);

class LemmaRules {
 public:
  LemmaRules() = default;

  // Built-in suffix rules plus the bundled exception dictionary.
  static LemmaRules defaults();
  static const std::vector<SuffixRule>& default_suffix_rules();

  // `surface<TAB>lemma` lines; `#` comments and blank lines ignored.
  // Throws ConfigError on malformed lines or cyclic entries.
  static std::unordered_map<std::string, std::string> parse_exceptions(std::istream& in);

  LemmaRules(std::unordered_map<std::string, std::string> exceptions, std::vector<SuffixRule> suffix_rules);

  // Exception-dictionary hit, else the first applicable suffix rule repeated
  // until no rule applies, else the token unchanged. Lemmas from the
  // dictionary are terminal, which makes the mapping idempotent.
  std::string lemmatize(std::string_view token) const;

  const std::unordered_map<std::string, std::string>& exceptions() const { return exceptions_; }
  const std::vector<SuffixRule>& suffix_rules() const { return suffix_rules_; }

 private:
  std::unordered_map<std::string, std::string> exceptions_;
  std::unordered_set<std::string> terminal_;
  std::vector<SuffixRule> suffix_rules_;
};

// Length-preserving: one output token per input token.
std::vector<std::string> lemmatize(std::vector<std::string> tokens, const LemmaRules& rules);

}  // namespace mediadisc
