#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mediadisc/corpus.hpp"
#include "mediadisc/lexicon.hpp"
#include "mediadisc/metrics.hpp"
#include "mediadisc/tabulate.hpp"

namespace mediadisc::tools {

// Everything a run depends on. Defaults carry the pipeline's published
// constants: bigrams mined at >= 100 per year, n-grams kept at > 50 per
// outlet, top 10 n-grams, 2014..2022.
struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path outlets;
  std::filesystem::path stoplist;          // empty = bundled list
  std::filesystem::path lemma_exceptions;  // empty = bundled dictionary
  std::filesystem::path lexicon;
  std::filesystem::path annotations;       // optional

  DateRange date_range;
  int first_year = 2014;
  int last_year = 2022;
  std::vector<Topic> topics{kAllTopics.begin(), kAllTopics.end()};
  std::uint64_t mining_threshold = 100;
  std::uint64_t inclusion_threshold = 50;
  std::size_t top_k = 10;
  std::optional<double> cluster_threshold;  // std::nullopt = auto
  MadVariant mad_variant = MadVariant::AllOutlets;
  CountingMode counting = CountingMode::Occurrences;
  SelectionMode selection = SelectionMode::AllMatches;
  std::vector<std::string> centroid_outlets;  // empty = every configured outlet
  std::vector<int> topk_years;                // empty = every year in range
  double max_skip_fraction = 0.01;
  std::uint64_t seed = 7;

  // Execution settings; they never change output bytes and are left out of
  // the manifest echo.
  std::filesystem::path out_dir = "out";
  std::size_t jobs = 1;

  std::vector<int> years() const;
  // Reproducibility-relevant settings as JSON.
  nlohmann::json echo() const;
};

// INI-style file: `[inputs]`, `[run]`, `[output]` sections of `key = value`
// lines, `#` or `;` comments. Relative paths resolve against the file's
// directory. Throws ConfigError on unknown keys or bad values.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_config_file(const std::filesystem::path& path);

// Individual setters shared by the file parser and the CLI flag overrides.
// Each throws ConfigError on a malformed value.
void set_years(RunConfig& cfg, std::string_view text);  // "A..B" or "A"
void set_topics(RunConfig& cfg, std::string_view text);  // comma list
void set_cluster_threshold(RunConfig& cfg, std::string_view text);  // number or "auto"
void set_counting(RunConfig& cfg, std::string_view text);
void set_mad_variant(RunConfig& cfg, std::string_view text);
void set_selection(RunConfig& cfg, std::string_view text);

enum class Stage { IngestCheck, Mine, Analyze, Verify, Report };

// Throws ConfigError listing every problem found.
void validate(const RunConfig& cfg, Stage stage);

}  // namespace mediadisc::tools
