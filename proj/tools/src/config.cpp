#include "mediadisc/tools/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include <fmt/format.h>

#include "mediadisc/error.hpp"

namespace mediadisc::tools {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    const auto item = trim(text.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not a valid number", key, text));
  }
  return value;
}

std::uint64_t parse_threshold(std::string_view text, std::string_view key) {
  const auto v = parse_number<std::uint64_t>(text, key);
  if (v < 1) throw ConfigError(fmt::format("{} must be >= 1", key));
  return v;
}

Date parse_date(std::string_view text, std::string_view key) {
  auto d = Date::parse(trim(text));
  if (!d) throw ConfigError(fmt::format("{}: '{}' is not a YYYY-MM-DD date", key, text));
  return *d;
}

fs::path resolve(std::string_view value, const fs::path& base) {
  const fs::path p{std::string(trim(value))};
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

std::vector<int> RunConfig::years() const {
  std::vector<int> out;
  for (int y = first_year; y <= last_year; ++y) out.push_back(y);
  return out;
}

nlohmann::json RunConfig::echo() const {
  nlohmann::json j;
  // File names only: where the inputs live does not affect the results, and
  // their content hashes go into the manifest separately.
  j["inputs"] = {{"corpus", corpus.filename().string()},
                 {"outlets", outlets.filename().string()},
                 {"stoplist", stoplist.filename().string()},
                 {"lemma_exceptions", lemma_exceptions.filename().string()},
                 {"lexicon", lexicon.filename().string()},
                 {"annotations", annotations.filename().string()}};
  std::vector<std::string> topic_keys;
  for (Topic t : topics) topic_keys.emplace_back(topic_key(t));
  j["run"] = {{"date_from", date_range.first.iso()},
              {"date_to", date_range.last.iso()},
              {"years", fmt::format("{}..{}", first_year, last_year)},
              {"topics", topic_keys},
              {"mining_threshold", mining_threshold},
              {"inclusion_threshold", inclusion_threshold},
              {"top_k", top_k},
              {"cluster_threshold", cluster_threshold ? nlohmann::json(*cluster_threshold) : nlohmann::json("auto")},
              {"mad_variant", std::string(to_string(mad_variant))},
              {"counting", std::string(to_string(counting))},
              {"selection", selection == SelectionMode::AllMatches ? "all" : "first"},
              {"centroid_outlets", centroid_outlets},
              {"topk_years", topk_years},
              {"max_skip_fraction", max_skip_fraction}};
  return j;
}

void set_years(RunConfig& cfg, std::string_view text) {
  text = trim(text);
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    cfg.first_year = cfg.last_year = parse_number<int>(text, "years");
  } else {
    cfg.first_year = parse_number<int>(text.substr(0, dots), "years");
    cfg.last_year = parse_number<int>(text.substr(dots + 2), "years");
  }
  if (cfg.first_year > cfg.last_year) throw ConfigError(fmt::format("years: empty range '{}'", text));
}

void set_topics(RunConfig& cfg, std::string_view text) {
  std::vector<Topic> topics;
  for (const auto& item : split_list(text)) {
    const auto t = parse_topic(item);
    if (!t) throw ConfigError(fmt::format("topics: unknown topic '{}'", item));
    if (std::find(topics.begin(), topics.end(), *t) == topics.end()) topics.push_back(*t);
  }
  if (topics.empty()) throw ConfigError("topics: list is empty");
  cfg.topics = std::move(topics);
}

void set_cluster_threshold(RunConfig& cfg, std::string_view text) {
  text = trim(text);
  if (text == "auto") {
    cfg.cluster_threshold.reset();
    return;
  }
  const double v = parse_number<double>(text, "cluster threshold");
  if (!(v >= 0.0)) throw ConfigError("cluster threshold must be >= 0 or 'auto'");
  cfg.cluster_threshold = v;
}

void set_counting(RunConfig& cfg, std::string_view text) {
  const auto mode = parse_counting_mode(trim(text));
  if (!mode) throw ConfigError(fmt::format("counting: expected 'occurrences' or 'headlines', got '{}'", text));
  cfg.counting = *mode;
}

void set_mad_variant(RunConfig& cfg, std::string_view text) {
  const auto v = parse_mad_variant(trim(text));
  if (!v) throw ConfigError(fmt::format("mad_variant: expected 'all' or 'major', got '{}'", text));
  cfg.mad_variant = *v;
}

void set_selection(RunConfig& cfg, std::string_view text) {
  text = trim(text);
  if (text == "all") {
    cfg.selection = SelectionMode::AllMatches;
  } else if (text == "first") {
    cfg.selection = SelectionMode::FirstMatch;
  } else {
    throw ConfigError(fmt::format("selection: expected 'all' or 'first', got '{}'", text));
  }
}

RunConfig parse_config(std::istream& in, const fs::path& base_dir) {
  RunConfig cfg;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#' || view.front() == ';') continue;
    if (view.front() == '[') {
      if (view.back() != ']') throw ConfigError(fmt::format("config line {}: malformed section header", line_no));
      section = std::string(trim(view.substr(1, view.size() - 2)));
      if (section != "inputs" && section != "run" && section != "output") {
        throw ConfigError(fmt::format("config line {}: unknown section [{}]", line_no, section));
      }
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("config line {}: expected key = value", line_no));
    const std::string key(trim(view.substr(0, eq)));
    const std::string_view value = trim(view.substr(eq + 1));
    const std::string qualified = section + "." + key;

    if (qualified == "inputs.corpus") cfg.corpus = resolve(value, base_dir);
    else if (qualified == "inputs.outlets") cfg.outlets = resolve(value, base_dir);
    else if (qualified == "inputs.stoplist") cfg.stoplist = resolve(value, base_dir);
    else if (qualified == "inputs.lemma_exceptions") cfg.lemma_exceptions = resolve(value, base_dir);
    else if (qualified == "inputs.lexicon") cfg.lexicon = resolve(value, base_dir);
    else if (qualified == "inputs.annotations") cfg.annotations = resolve(value, base_dir);
    else if (qualified == "run.years") set_years(cfg, value);
    else if (qualified == "run.date_from") cfg.date_range.first = parse_date(value, qualified);
    else if (qualified == "run.date_to") cfg.date_range.last = parse_date(value, qualified);
    else if (qualified == "run.topics") set_topics(cfg, value);
    else if (qualified == "run.mining_threshold") cfg.mining_threshold = parse_threshold(value, qualified);
    else if (qualified == "run.inclusion_threshold") cfg.inclusion_threshold = parse_threshold(value, qualified);
    else if (qualified == "run.top_k") cfg.top_k = parse_threshold(value, qualified);
    else if (qualified == "run.cluster_threshold") set_cluster_threshold(cfg, value);
    else if (qualified == "run.mad_variant") set_mad_variant(cfg, value);
    else if (qualified == "run.counting") set_counting(cfg, value);
    else if (qualified == "run.selection") set_selection(cfg, value);
    else if (qualified == "run.centroid_outlets") cfg.centroid_outlets = split_list(value);
    else if (qualified == "run.topk_years") {
      cfg.topk_years.clear();
      for (const auto& y : split_list(value)) cfg.topk_years.push_back(parse_number<int>(y, qualified));
    } else if (qualified == "run.max_skip_fraction") cfg.max_skip_fraction = parse_number<double>(value, qualified);
    else if (qualified == "run.seed") cfg.seed = parse_number<std::uint64_t>(value, qualified);
    else if (qualified == "output.dir") cfg.out_dir = resolve(value, base_dir);
    else if (qualified == "output.jobs") cfg.jobs = parse_threshold(value, qualified);
    else throw ConfigError(fmt::format("config line {}: unknown key '{}'", line_no, qualified));
  }
  if (cfg.date_range.first > cfg.date_range.last) throw ConfigError("config: date_from is after date_to");
  return cfg;
}

RunConfig load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  return parse_config(in, path.parent_path());
}

void validate(const RunConfig& cfg, Stage stage) {
  std::vector<std::string> problems;
  auto need = [&](const fs::path& p, std::string_view what) {
    if (p.empty()) {
      problems.push_back(fmt::format("{} path is not set", what));
    } else if (!fs::is_regular_file(p)) {
      problems.push_back(fmt::format("{} '{}' does not exist", what, p.string()));
    }
  };
  auto optional_file = [&](const fs::path& p, std::string_view what) {
    if (!p.empty() && !fs::is_regular_file(p)) problems.push_back(fmt::format("{} '{}' does not exist", what, p.string()));
  };

  if (stage == Stage::IngestCheck || stage == Stage::Mine || stage == Stage::Analyze) {
    need(cfg.corpus, "corpus");
    need(cfg.outlets, "outlet config");
    optional_file(cfg.stoplist, "stoplist");
    optional_file(cfg.lemma_exceptions, "lemma exceptions");
    if (!cfg.corpus.empty() && !format_from_path(cfg.corpus.string())) {
      problems.push_back(fmt::format("corpus '{}' must end in .jsonl or .csv", cfg.corpus.string()));
    }
  }
  if (stage == Stage::Analyze) {
    need(cfg.lexicon, "lexicon");
    optional_file(cfg.annotations, "annotations");
  }
  if (stage == Stage::Verify || stage == Stage::Report) {
    if (!fs::is_regular_file(cfg.out_dir / "run_manifest.json")) {
      problems.push_back(fmt::format("no run_manifest.json under '{}'; run analyze first", cfg.out_dir.string()));
    }
  }
  if (cfg.first_year > cfg.last_year) problems.emplace_back("year range is empty");
  if (cfg.mining_threshold < 1 || cfg.inclusion_threshold < 1 || cfg.top_k < 1) {
    problems.emplace_back("thresholds and top_k must be >= 1");
  }
  if (cfg.jobs < 1) problems.emplace_back("jobs must be >= 1");
  if (!(cfg.max_skip_fraction >= 0.0 && cfg.max_skip_fraction <= 1.0)) {
    problems.emplace_back("max_skip_fraction must lie in [0, 1]");
  }
  if (stage == Stage::Mine || stage == Stage::Analyze) {
    std::error_code ec;
    if (fs::exists(cfg.out_dir, ec) && !fs::is_directory(cfg.out_dir, ec)) {
      problems.push_back(fmt::format("output path '{}' exists and is not a directory", cfg.out_dir.string()));
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ConfigError(msg);
  }
}

}  // namespace mediadisc::tools
