#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace fixture {

namespace fs = std::filesystem;

oracle::CountMatrix random_counts(mediadisc::FixtureRng& rng, std::size_t rows, std::size_t cols,
                                  std::uint64_t max_count) {
  oracle::CountMatrix n(rows, std::vector<std::uint64_t>(cols, 0));
  for (auto& row : n) {
    for (auto& v : row) v = rng.below(max_count + 1);
  }
  // Repair empty rows and columns with a single positive cell.
  for (std::size_t i = 0; i < rows; ++i) {
    bool any = false;
    for (auto v : n[i]) any = any || v > 0;
    if (!any) n[i][rng.below(cols)] = 1 + rng.below(max_count);
  }
  for (std::size_t j = 0; j < cols; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < rows; ++i) any = any || n[i][j] > 0;
    if (!any) n[rng.below(rows)][j] = 1 + rng.below(max_count);
  }
  return n;
}

mediadisc::ContingencyTable to_table(const oracle::CountMatrix& counts, mediadisc::UnitId unit) {
  std::vector<std::string> columns;
  for (std::size_t j = 0; j < (counts.empty() ? 0 : counts[0].size()); ++j) columns.push_back("o" + std::to_string(j + 1));
  std::vector<mediadisc::NGram> rows;
  std::vector<std::uint64_t> flat;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    rows.emplace_back(std::vector<std::string>{"w" + std::to_string(i), "x"});
    flat.insert(flat.end(), counts[i].begin(), counts[i].end());
  }
  return mediadisc::ContingencyTable(unit, columns, rows, flat);
}

oracle::CountMatrix from_table(const mediadisc::ContingencyTable& table) {
  oracle::CountMatrix n(table.row_count(), std::vector<std::uint64_t>(table.column_count()));
  for (std::size_t i = 0; i < table.row_count(); ++i) {
    for (std::size_t j = 0; j < table.column_count(); ++j) n[i][j] = table.at(i, j);
  }
  return n;
}

mediadisc::Matrix random_matrix(mediadisc::FixtureRng& rng, std::size_t rows, std::size_t cols) {
  mediadisc::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = 2.0 * rng.uniform() - 1.0;
  }
  return m;
}

std::vector<std::string> planted_outlet_names() {
  std::vector<std::string> names;
  for (int i = 1; i <= 9; ++i) names.push_back("o" + std::to_string(i));
  return names;
}

std::vector<mediadisc::Headline> planted_discrepancy(std::uint64_t seed, const std::string& odd_outlet,
                                                     std::size_t per_outlet, int year) {
  mediadisc::FixtureRng rng(seed);
  const std::size_t vocab = 16;
  std::vector<double> weights(vocab);
  for (std::size_t v = 0; v < vocab; ++v) weights[v] = 1.0 / static_cast<double>(v + 1);
  std::vector<mediadisc::Headline> out;
  for (const auto& name : planted_outlet_names()) {
    const std::string prefix = name == odd_outlet ? "beta" : "alpha";
    for (std::size_t h = 0; h < per_outlet; ++h) {
      const std::size_t v = rng.weighted(weights);
      out.push_back({name, year, {prefix + std::to_string(v), "topic" + std::to_string(v % 4)}});
    }
  }
  return out;
}

namespace {
std::atomic<int> temp_counter{0};
}

TempDir::TempDir(const std::string& tag) {
  path_ = fs::temp_directory_path() /
          ("mediadisc_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(temp_counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

struct LogCapture::State {
  std::mutex mutex;
  std::vector<std::string> warnings;
};

LogCapture::LogCapture() : state_(std::make_shared<State>()) {
  previous_ = mediadisc::log::set_sink([state = state_](mediadisc::log::Level level, std::string_view msg) {
    if (level != mediadisc::log::Level::Warn) return;
    std::lock_guard lock(state->mutex);
    state->warnings.emplace_back(msg);
  });
}

LogCapture::~LogCapture() { mediadisc::log::set_sink(std::move(previous_)); }

std::vector<std::string> LogCapture::warnings() const {
  std::lock_guard lock(state_->mutex);
  return state_->warnings;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), root).generic_string()] = read_file(entry.path());
  }
  return files;
}

}  // namespace fixture
