#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mediadisc/corpus.hpp"
#include "mediadisc/lexicon.hpp"
#include "mediadisc/tools/config.hpp"

namespace mediadisc::tools {

// Lowercase hex SHA-256 of a file's bytes / of a string.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view data);

Preprocessor make_preprocessor(const RunConfig& cfg);

struct LoadedCorpus {
  std::vector<OutletInfo> outlets;
  IngestResult ingest;
  BuildResult built;  // headlines restricted to the configured years
};

LoadedCorpus load_corpus(const RunConfig& cfg, const Preprocessor& preprocessor);

struct IngestCheckSummary {
  std::size_t rows_seen = 0;
  std::size_t records = 0;
  std::size_t skipped = 0;
  std::size_t out_of_range = 0;
  std::size_t dropped_empty = 0;
  std::map<std::string, std::size_t> per_outlet;
  std::map<int, std::size_t> per_year;
};

IngestCheckSummary run_ingest_check(const RunConfig& cfg, std::ostream& out);

struct MineSummary {
  std::size_t headlines = 0;
  std::size_t candidates = 0;
};

// Writes mining_report.csv and lexicon_skeleton.tsv under cfg.out_dir.
MineSummary run_mine(const RunConfig& cfg, std::ostream& out);

struct UnitStatus {
  Topic topic = Topic::ForeignAffairs;
  int year = 0;
  std::string status;  // "ok", "degenerate" or "failed"
  std::string reason;
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::vector<std::string> dropped_columns;
  double total_inertia = 0.0;
  double explained_2d = 0.0;
};

struct AnalyzeSummary {
  std::vector<UnitStatus> units;
  std::vector<std::string> outputs;  // relative to cfg.out_dir, sorted
};

// Full analysis; writes the per-unit and per-topic outputs plus
// run_manifest.json. Only global failures throw; a unit that cannot be
// analysed is recorded in the manifest.
AnalyzeSummary run_analyze(const RunConfig& cfg, std::ostream& out);

struct UnitCheck {
  std::string unit;
  bool skipped = false;
  std::string reason;  // skip reason, or the failed checks
  double inertia_residual = 0.0;
  double centering_residual = 0.0;
  double distance_residual = 0.0;
  double coordinate_residual = 0.0;
  bool passed() const { return skipped || reason.empty(); }
};

struct VerifyReport {
  std::vector<UnitCheck> units;
  bool ok() const;
};

// Re-derives every embedding from its table.csv and checks the stored
// outputs against it.
VerifyReport run_verify(const RunConfig& cfg, std::ostream& out);

// Re-renders every SVG from the CSV outputs of a previous analyze run.
std::size_t run_report(const RunConfig& cfg, std::ostream& out);

struct SynthOptions {
  std::uint64_t seed = 7;
  std::size_t headlines = 30000;
};

// Writes a synthetic corpus.jsonl, outlets.json, lexicon.tsv and a matching
// config.ini into `dir`.
void run_synth(const SynthOptions& options, const std::filesystem::path& dir, std::ostream& out);

// Entry point shared by the executable and the tests. Returns the process
// exit code: 0 success, 2 configuration error, 3 data error, 4 numerical
// failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mediadisc::tools
