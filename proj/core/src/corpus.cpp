#include "mediadisc/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mediadisc/csv.hpp"
#include "mediadisc/error.hpp"
#include "mediadisc/log.hpp"

namespace mediadisc {

namespace bundled {
extern const std::string_view kStopwords;
}

namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Decodes one UTF-8 code point at `pos`, advancing it. Invalid bytes decode
// to U+FFFD and consume a single byte.
char32_t next_code_point(std::string_view s, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + static_cast<std::size_t>(extra) >= s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int i = 1; i <= extra; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + static_cast<std::size_t>(i)]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += static_cast<std::size_t>(extra) + 1;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

enum class CharClass { Word, Apostrophe, Separator };

CharClass classify(char32_t cp) {
  if (cp < 0x80) {
    const char c = static_cast<char>(cp);
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return CharClass::Word;
    return c == '\'' ? CharClass::Apostrophe : CharClass::Separator;
  }
  if (cp == 0x2018 || cp == 0x2019) return CharClass::Apostrophe;
  // Latin-1 punctuation and symbols, multiplication and division signs.
  if ((cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7) return CharClass::Separator;
  // General punctuation, spaces, currency and symbol blocks, CJK punctuation.
  if ((cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F) || cp == 0xFEFF || cp == 0xFFFD) {
    return CharClass::Separator;
  }
  return CharClass::Word;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + ('a' - 'A');
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

void flush_token(std::string& current, std::vector<std::string>& out) {
  std::string_view view = current;
  while (!view.empty() && view.front() == '\'') view.remove_prefix(1);
  while (!view.empty() && view.back() == '\'') view.remove_suffix(1);
  if (!view.empty()) out.emplace_back(view);
  current.clear();
}

std::optional<RawRecord> make_record(std::string_view outlet, std::string_view date, std::string_view title,
                                     std::string& reason) {
  const std::string_view trimmed_outlet = trim(outlet);
  if (trimmed_outlet.empty()) {
    reason = "empty outlet";
    return std::nullopt;
  }
  const auto parsed = Date::parse(trim(date));
  if (!parsed) {
    reason = fmt::format("unparseable date '{}'", date);
    return std::nullopt;
  }
  if (trim(title).empty()) {
    reason = "empty title";
    return std::nullopt;
  }
  return RawRecord{lower_ascii(trimmed_outlet), *parsed, std::string(title)};
}

std::optional<RawRecord> parse_json_line(std::string_view line, std::string& reason) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    reason = "invalid JSON";
    return std::nullopt;
  }
  if (!obj.is_object()) {
    reason = "line is not a JSON object";
    return std::nullopt;
  }
  for (const char* key : {"outlet", "date", "title"}) {
    if (!obj.contains(key) || !obj[key].is_string()) {
      reason = fmt::format("missing or non-string key '{}'", key);
      return std::nullopt;
    }
  }
  return make_record(obj["outlet"].get_ref<const std::string&>(), obj["date"].get_ref<const std::string&>(),
                     obj["title"].get_ref<const std::string&>(), reason);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Leaning leaning) {
  switch (leaning) {
    case Leaning::Left: return "left";
    case Leaning::Central: return "central";
    case Leaning::Right: return "right";
  }
  return "central";
}

std::optional<Leaning> parse_leaning(std::string_view text) {
  const std::string lower = lower_ascii(trim(text));
  if (lower == "left") return Leaning::Left;
  if (lower == "central" || lower == "center" || lower == "centre") return Leaning::Central;
  if (lower == "right") return Leaning::Right;
  return std::nullopt;
}

std::vector<OutletInfo> load_outlets(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("outlet config: {}", e.what()));
  }
  const nlohmann::json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("outlets")) throw ConfigError("outlet config: missing 'outlets' array");
    list = &doc["outlets"];
  }
  if (!list->is_array()) throw ConfigError("outlet config: expected an array of outlets");

  std::vector<OutletInfo> out;
  std::set<std::string> seen;
  for (const auto& entry : *list) {
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("leaning") || !entry["leaning"].is_string()) {
      throw ConfigError("outlet config: each outlet needs string 'name' and 'leaning'");
    }
    const std::string name = lower_ascii(trim(entry["name"].get<std::string>()));
    const auto leaning = parse_leaning(entry["leaning"].get<std::string>());
    if (name.empty()) throw ConfigError("outlet config: empty outlet name");
    if (!leaning) {
      throw ConfigError(fmt::format("outlet config: outlet '{}' has unknown leaning '{}'", name,
                                    entry["leaning"].get<std::string>()));
    }
    if (!seen.insert(name).second) throw ConfigError(fmt::format("outlet config: duplicate outlet '{}'", name));
    out.push_back({name, *leaning});
  }
  return out;
}

// ---------------------------------------------------------------------------

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t from, std::size_t count) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = from; i < from + count; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  const auto y = digits(0, 4);
  const auto m = digits(5, 2);
  const auto d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{*y, static_cast<unsigned>(*m), static_cast<unsigned>(*d)};
}

std::string Date::iso() const { return fmt::format("{:04d}-{:02d}-{:02d}", year, month, day); }

std::optional<InputFormat> format_from_path(std::string_view raw) {
  std::string path(raw);
  for (auto& c : path) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (path.ends_with(".jsonl") || path.ends_with(".ndjson") || path.ends_with(".json")) {
    return InputFormat::JsonLines;
  }
  if (path.ends_with(".csv")) return InputFormat::Csv;
  return std::nullopt;
}

IngestResult ingest(std::istream& in, InputFormat format, const IngestOptions& options) {
  if (!in.good() && !in.eof()) throw DataError("ingest: input stream is not readable");
  IngestResult result;

  auto accept = [&](std::optional<RawRecord> rec, std::size_t line, const std::string& reason) {
    if (!rec) {
      log::warn(fmt::format("ingest: skipping line {}: {}", line, reason));
      result.skipped.push_back({line, reason});
    } else if (!options.range.contains(rec->date)) {
      ++result.out_of_range;
    } else {
      result.records.push_back(std::move(*rec));
    }
  };

  if (format == InputFormat::JsonLines) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      std::string reason;
      auto rec = parse_json_line(line, reason);
      accept(std::move(rec), line_no, reason);
    }
  } else {
    csv::Reader reader(in);
    auto header = reader.next();
    if (header) {
      std::vector<std::string> names;
      for (const auto& f : header->fields) names.push_back(lower_ascii(trim(f)));
      if (header->malformed || names != std::vector<std::string>{"outlet", "date", "title"}) {
        throw DataError("ingest: CSV header must be exactly 'outlet,date,title'");
      }
    }
    while (auto row = reader.next()) {
      if (row->fields.size() == 1 && trim(row->fields[0]).empty()) continue;
      std::string reason;
      std::optional<RawRecord> rec;
      if (row->malformed) {
        reason = "bad quoting";
      } else if (row->fields.size() != 3) {
        reason = fmt::format("expected 3 fields, found {}", row->fields.size());
      } else {
        rec = make_record(row->fields[0], row->fields[1], row->fields[2], reason);
      }
      accept(std::move(rec), row->line, reason);
    }
  }
  if (in.bad()) throw DataError("ingest: read error on input stream");

  const std::size_t seen = result.rows_seen();
  if (seen > 0) {
    const double fraction = static_cast<double>(result.skipped.size()) / static_cast<double>(seen);
    if (fraction > options.max_skip_fraction) {
      throw DataError(fmt::format("ingest: {} of {} rows malformed ({:.2f}%), limit is {:.2f}%",
                                  result.skipped.size(), seen, 100.0 * fraction,
                                  100.0 * options.max_skip_fraction));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

Stoplist load_stoplist(std::istream& in) {
  Stoplist out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    out.insert(lower_ascii(view));
  }
  return out;
}

const Stoplist& default_stoplist() {
  static const Stoplist list = [] {
    std::istringstream in{std::string(bundled::kStopwords)};
    return load_stoplist(in);
  }();
  return list;
}

std::vector<std::string> tokenize(std::string_view title) {
  std::vector<std::string> out;
  std::string current;
  std::size_t pos = 0;
  while (pos < title.size()) {
    const char32_t cp = next_code_point(title, pos);
    switch (classify(cp)) {
      case CharClass::Word: append_utf8(current, to_lower(cp)); break;
      case CharClass::Apostrophe: current.push_back('\''); break;
      case CharClass::Separator: flush_token(current, out); break;
    }
  }
  flush_token(current, out);
  return out;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens, const Stoplist& stoplist) {
  std::erase_if(tokens, [&](const std::string& t) { return stoplist.contains(t); });
  return tokens;
}

std::vector<std::string> Preprocessor::operator()(std::string_view title) const {
  auto tokens = lemmatize(remove_stopwords(tokenize(title), stoplist_), rules_);
  // A lemma can land on a stoplist entry ("others" -> "other").
  return remove_stopwords(std::move(tokens), stoplist_);
}

BuildResult build_headlines(std::span<const RawRecord> records, std::span<const OutletInfo> outlets,
                            const Preprocessor& preprocessor, std::size_t jobs) {
  std::set<std::string, std::less<>> known;
  for (const auto& o : outlets) known.insert(o.name);
  std::set<std::string> unknown;
  for (const auto& r : records) {
    if (!known.contains(r.outlet)) unknown.insert(r.outlet);
  }
  if (!unknown.empty()) {
    std::string names;
    for (const auto& n : unknown) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError(fmt::format("records reference outlets missing from the outlet config: {}", names));
  }

  std::vector<std::vector<std::string>> tokens(records.size());
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, records.size()));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) tokens[i] = preprocessor(records[i].title);
  };
  if (workers == 1) {
    work(0, records.size());
  } else {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (records.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(records.size(), begin + chunk);
      if (begin < end) threads.emplace_back(work, begin, end);
    }
  }

  BuildResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (tokens[i].empty()) {
      ++result.dropped_empty;
      continue;
    }
    result.headlines.push_back({records[i].outlet, records[i].date.year, std::move(tokens[i])});
  }
  return result;
}

}  // namespace mediadisc
