#include "mediadisc/lemmatizer.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>

#include "mediadisc/error.hpp"

namespace mediadisc {

namespace bundled {
extern const std::string_view kLemmaExceptions;
}

namespace {

bool ends_with_any(std::string_view word, const std::vector<std::string>& endings) {
  return std::any_of(endings.begin(), endings.end(),
                     [&](const std::string& e) { return word.ends_with(e); });
}

bool has_vowel(std::string_view s) { return s.find_first_of("aeiouy") != std::string_view::npos; }

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool in(char c, std::string_view set) { return set.find(c) != std::string_view::npos; }

// Porter's consonant test: "y" is a consonant at the start or after a vowel.
bool consonant_at(std::string_view w, std::size_t i) {
  if (is_vowel(w[i])) return false;
  if (w[i] == 'y') return i == 0 || !consonant_at(w, i - 1);
  return true;
}

// Number of vowel-consonant sequences.
std::size_t measure(std::string_view w) {
  std::size_t m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool cons = consonant_at(w, i);
    if (cons && prev_vowel) ++m;
    prev_vowel = !cons;
  }
  return m;
}

// Applies the rule to `word`; returns false when it does not fire.
bool apply_rule(const SuffixRule& rule, std::string& word) {
  if (!word.ends_with(rule.suffix)) return false;
  if (ends_with_any(word, rule.blocked_endings)) return false;
  std::string stem = word.substr(0, word.size() - rule.suffix.size());
  if (stem.size() < rule.min_stem) return false;
  if (rule.stem_needs_vowel && !has_vowel(stem)) return false;
  bool undoubled = false;
  if (rule.undouble && stem.size() >= 2 && stem.size() - 1 >= rule.min_stem) {
    const char last = stem.back();
    if (last == stem[stem.size() - 2] && !is_vowel(last) && last != 'l' && last != 's' && last != 'z') {
      stem.pop_back();
      undoubled = true;
    }
  }
  if (rule.restore_e && !undoubled && needs_final_e(stem)) stem.push_back('e');
  word = stem + rule.replacement;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

bool needs_final_e(std::string_view stem) {
  const std::size_t n = stem.size();
  if (n < 3) return false;
  const char last = stem[n - 1];
  const char prev = stem[n - 2];
  const char before = stem[n - 3];
  if (is_vowel(last) || in(last, "wxyh")) return false;

  if (last == 'l' && in(prev, "bcdfgkptz")) return true;  // troubl, settl, handl
  if (stem.ends_with("iz")) return true;
  if (stem.ends_with("at")) return !in(before, "aeo");  // dat, negotiat; not treat, float
  switch (last) {
    case 'c':
      return prev != 'c';
    case 'v':
    case 'z':
      return prev != last;
    case 'g':
      if (prev == 'r' || prev == 'd') return true;  // charg, judg
      if (prev == 'n') return in(before, "aeu");    // chang, challeng; not belong, bring
      break;
    case 's':
      if (prev == 's') return false;
      return is_vowel(prev) || in(prev, "nrpl");  // caus, propos, licens
    default:
      break;
  }

  // A single vowel before the final consonant ("qu" counts as a consonant).
  const bool single_vowel = is_vowel(prev) && (!is_vowel(before) || (before == 'u' && n >= 4 && stem[n - 4] == 'q'));
  if (single_vowel) {
    bool hit = false;
    switch (last) {
      case 'b': hit = prev == 'i'; break;
      case 'd': hit = prev != 'e'; break;
      case 'g': hit = true; break;
      case 'k': hit = prev != 'e'; break;
      case 'l': hit = in(prev, "iou"); break;
      case 'm': hit = true; break;
      case 'n': hit = in(prev, "iu"); break;
      case 'p': hit = in(prev, "ai"); break;
      case 'r': hit = in(prev, "aiu"); break;
      case 't': hit = in(prev, "ou"); break;
      default: break;
    }
    if (hit) return true;
  }

  // Short consonant-vowel-consonant stems: verbs of this shape double their
  // final consonant before -ed/-ing unless they end in a silent e.
  return measure(stem) == 1 && consonant_at(stem, n - 1) && !consonant_at(stem, n - 2) && consonant_at(stem, n - 3);
}

const std::vector<SuffixRule>& LemmaRules::default_suffix_rules() {
  static const std::vector<SuffixRule> rules = {
      {"'s", "", 1, {}, false, false, false},
      {"ies", "y", 2, {}, false, false, false},
      {"sses", "ss", 2, {}, false, false, false},
      {"xes", "x", 2, {}, false, false, false},
      {"ches", "ch", 2, {}, false, false, false},
      {"shes", "sh", 2, {}, false, false, false},
      {"s", "", 3, {"ss", "us", "is", "'s"}, false, false, false},
      {"ing", "", 3, {}, true, true, true},
      {"ied", "y", 2, {}, false, false, false},
      {"ed", "", 3, {"eed"}, true, true, true},
  };
  return rules;
}

std::unordered_map<std::string, std::string> LemmaRules::parse_exceptions(std::istream& in) {
  std::unordered_map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos) {
      throw ConfigError(fmt::format("lemma exceptions line {}: expected surface<TAB>lemma", line_no));
    }
    const std::string surface = lower_ascii(trim(view.substr(0, tab)));
    const std::string lemma = lower_ascii(trim(view.substr(tab + 1)));
    if (surface.empty() || lemma.empty() || lemma.find_first_of(" \t") != std::string::npos) {
      throw ConfigError(fmt::format("lemma exceptions line {}: empty or multi-word entry", line_no));
    }
    out[surface] = lemma;
  }
  return out;
}

LemmaRules::LemmaRules(std::unordered_map<std::string, std::string> exceptions,
                       std::vector<SuffixRule> suffix_rules)
    : suffix_rules_(std::move(suffix_rules)) {
  for (const auto& rule : suffix_rules_) {
    if (rule.suffix.empty() || rule.replacement.size() + (rule.restore_e ? 1 : 0) >= rule.suffix.size()) {
      throw ConfigError(fmt::format("suffix rule '-{}' -> '-{}' must shorten the word", rule.suffix,
                                    rule.replacement));
    }
  }
  // Resolve chains (a -> b, b -> c) so every lemma is a fixed point.
  for (auto& [surface, lemma] : exceptions) {
    std::string target = lemma;
    for (std::size_t hops = 0;; ++hops) {
      auto it = exceptions.find(target);
      if (it == exceptions.end() || it->second == target) break;
      if (hops > exceptions.size()) {
        throw ConfigError(fmt::format("lemma exceptions: cycle through '{}'", surface));
      }
      target = it->second;
    }
    exceptions_.emplace(surface, std::move(target));
  }
  for (const auto& [surface, lemma] : exceptions_) terminal_.insert(lemma);
}

LemmaRules LemmaRules::defaults() {
  static const LemmaRules rules = [] {
    std::istringstream in{std::string(bundled::kLemmaExceptions)};
    return LemmaRules(parse_exceptions(in), default_suffix_rules());
  }();
  return rules;
}

std::string LemmaRules::lemmatize(std::string_view token) const {
  std::string word(token);
  // Every rule shortens the word, so this terminates.
  for (;;) {
    if (auto it = exceptions_.find(word); it != exceptions_.end()) return it->second;
    if (terminal_.contains(word)) return word;
    bool fired = false;
    for (const auto& rule : suffix_rules_) {
      if (apply_rule(rule, word)) {
        fired = true;
        break;
      }
    }
    if (!fired) return word;
  }
}

std::vector<std::string> lemmatize(std::vector<std::string> tokens, const LemmaRules& rules) {
  for (auto& t : tokens) t = rules.lemmatize(t);
  return tokens;
}

}  // namespace mediadisc
