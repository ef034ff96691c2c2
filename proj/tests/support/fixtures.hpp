#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mediadisc/corpus.hpp"
#include "mediadisc/log.hpp"
#include "mediadisc/matrix.hpp"
#include "mediadisc/synthetic.hpp"
#include "mediadisc/tabulate.hpp"
#include "oracles.hpp"

namespace fixture {

// Counts in [0, max_count]; rows and columns are re-drawn until none is all zero.
oracle::CountMatrix random_counts(mediadisc::FixtureRng& rng, std::size_t rows, std::size_t cols,
                                  std::uint64_t max_count);

mediadisc::ContingencyTable to_table(const oracle::CountMatrix& counts,
                                     mediadisc::UnitId unit = {mediadisc::Topic::DomesticPolitics, 2020});

oracle::CountMatrix from_table(const mediadisc::ContingencyTable& table);

// Entries uniform in [-1, 1).
mediadisc::Matrix random_matrix(mediadisc::FixtureRng& rng, std::size_t rows, std::size_t cols);

// Nine outlets "o1".."o9"; o1..o8 draw two-token headlines from one bigram
// distribution, `odd_outlet` from a disjoint one.
std::vector<mediadisc::Headline> planted_discrepancy(std::uint64_t seed, const std::string& odd_outlet,
                                                     std::size_t per_outlet = 400, int year = 2020);
std::vector<std::string> planted_outlet_names();

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Collects warnings while alive instead of printing them.
class LogCapture {
 public:
  LogCapture();
  ~LogCapture();
  LogCapture(const LogCapture&) = delete;
  LogCapture& operator=(const LogCapture&) = delete;
  std::vector<std::string> warnings() const;

 private:
  struct State;
  std::shared_ptr<State> state_;
  mediadisc::log::Sink previous_;
};

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Relative path -> file bytes for every regular file under `root`.
std::map<std::string, std::string> snapshot(const std::filesystem::path& root);

}  // namespace fixture
