#include "mediadisc/tools/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "mediadisc/ca.hpp"
#include "mediadisc/error.hpp"
#include "mediadisc/log.hpp"
#include "mediadisc/metrics.hpp"
#include "mediadisc/report.hpp"
#include "mediadisc/synthetic.hpp"
#include "mediadisc/tabulate.hpp"

namespace mediadisc::tools {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr std::string_view kManifestName = "run_manifest.json";

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      EVP_MD_CTX_free(ctx_);
      throw std::runtime_error("sha256: cannot initialise digest");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx_, data, size) != 1) throw std::runtime_error("sha256: update failed");
  }

  std::string hex() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_, digest, &len) != 1) throw std::runtime_error("sha256: finalise failed");
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, std::string_view content) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
}

std::ifstream open_input(const fs::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open {} '{}'", what, path.string()));
  return in;
}

std::string unit_dir(Topic topic, int year) { return fmt::format("{}/{}", topic_key(topic), year); }

// Worker pool over indices [0, n). Exceptions from workers propagate.
template <typename F>
void parallel_for(std::size_t n, std::size_t jobs, F&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::string> outlet_names(const std::vector<OutletInfo>& outlets) {
  std::vector<std::string> names;
  for (const auto& o : outlets) names.push_back(o.name);
  return names;
}

double scaled_tolerance(double tol, double magnitude) { return tol * std::max(1.0, std::abs(magnitude)); }

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read '{}'", path.string()));
  Sha256 h;
  char buffer[1 << 16];
  while (in) {
    in.read(buffer, sizeof buffer);
    if (in.gcount() > 0) h.update(buffer, static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

Preprocessor make_preprocessor(const RunConfig& cfg) {
  Stoplist stoplist = default_stoplist();
  if (!cfg.stoplist.empty()) {
    auto in = open_input(cfg.stoplist, "stoplist");
    stoplist = load_stoplist(in);
  }
  LemmaRules rules = LemmaRules::defaults();
  if (!cfg.lemma_exceptions.empty()) {
    auto in = open_input(cfg.lemma_exceptions, "lemma exceptions");
    rules = LemmaRules(LemmaRules::parse_exceptions(in), LemmaRules::default_suffix_rules());
  }
  return Preprocessor(std::move(stoplist), std::move(rules));
}

LoadedCorpus load_corpus(const RunConfig& cfg, const Preprocessor& preprocessor) {
  LoadedCorpus loaded;
  {
    auto in = open_input(cfg.outlets, "outlet config");
    loaded.outlets = load_outlets(in);
  }
  const auto format = format_from_path(cfg.corpus.string());
  if (!format) throw ConfigError(fmt::format("corpus '{}' must end in .jsonl or .csv", cfg.corpus.string()));
  {
    auto in = open_input(cfg.corpus, "corpus");
    loaded.ingest = ingest(in, *format, IngestOptions{cfg.date_range, cfg.max_skip_fraction});
  }
  std::vector<RawRecord> in_years;
  in_years.reserve(loaded.ingest.records.size());
  for (const auto& r : loaded.ingest.records) {
    if (r.date.year >= cfg.first_year && r.date.year <= cfg.last_year) in_years.push_back(r);
  }
  loaded.built = build_headlines(in_years, loaded.outlets, preprocessor, cfg.jobs);
  return loaded;
}

IngestCheckSummary run_ingest_check(const RunConfig& cfg, std::ostream& out) {
  validate(cfg, Stage::IngestCheck);
  const auto preprocessor = make_preprocessor(cfg);
  const auto loaded = load_corpus(cfg, preprocessor);

  IngestCheckSummary s;
  s.rows_seen = loaded.ingest.rows_seen();
  s.records = loaded.ingest.records.size();
  s.skipped = loaded.ingest.skipped.size();
  s.out_of_range = loaded.ingest.out_of_range;
  s.dropped_empty = loaded.built.dropped_empty;
  for (const auto& o : loaded.outlets) s.per_outlet[o.name] = 0;
  for (const auto& h : loaded.built.headlines) {
    ++s.per_outlet[h.outlet];
    ++s.per_year[h.year];
  }

  out << fmt::format("rows: {}  accepted: {}  skipped: {}  out of range: {}  empty after preprocessing: {}\n",
                     s.rows_seen, s.records, s.skipped, s.out_of_range, s.dropped_empty);
  for (const auto& row : loaded.ingest.skipped) out << fmt::format("  skipped line {}: {}\n", row.line, row.reason);
  out << "headlines per outlet:\n";
  for (const auto& [name, n] : s.per_outlet) out << fmt::format("  {:<16} {}\n", name, n);
  out << "headlines per year:\n";
  for (const auto& [year, n] : s.per_year) out << fmt::format("  {}  {}\n", year, n);
  return s;
}

MineSummary run_mine(const RunConfig& cfg, std::ostream& out) {
  validate(cfg, Stage::Mine);
  const auto preprocessor = make_preprocessor(cfg);
  const auto loaded = load_corpus(cfg, preprocessor);
  const auto& headlines = loaded.built.headlines;
  const MiningReport report = mine_frequent_bigrams(headlines, cfg.mining_threshold, cfg.jobs);
  const auto ranked = report.ranked();

  std::string csv = "bigram,year,count\n";
  std::string skeleton = fmt::format(
      "# Frequent bigrams (>= {} in some year), most frequent first.\n"
      "# Fill the second column with foreign, domestic, economic or social; leave blank to exclude.\n",
      cfg.mining_threshold);
  for (const auto& bigram : ranked) {
    for (const auto& [year, count] : report.candidates.at(bigram)) {
      csv += fmt::format("{},{},{}\n", bigram.str(), year, count);
    }
    skeleton += bigram.str() + "\t\n";
  }
  write_text(cfg.out_dir / "mining_report.csv", csv);
  write_text(cfg.out_dir / "lexicon_skeleton.tsv", skeleton);

  out << fmt::format("{} headlines, {} candidate bigrams (threshold {} per year)\n", headlines.size(),
                     ranked.size(), cfg.mining_threshold);
  return {headlines.size(), ranked.size()};
}

AnalyzeSummary run_analyze(const RunConfig& cfg, std::ostream& out) {
  validate(cfg, Stage::Analyze);
  const auto preprocessor = make_preprocessor(cfg);
  LexiconLoadReport lexicon_report;
  TopicLexicon lexicon;
  {
    auto in = open_input(cfg.lexicon, "lexicon");
    lexicon = load_lexicon(in, preprocessor, &lexicon_report);
  }
  Annotations annotations;
  if (!cfg.annotations.empty()) {
    auto in = open_input(cfg.annotations, "annotations");
    annotations = load_annotations(in);
  }
  const auto loaded = load_corpus(cfg, preprocessor);
  const auto names = outlet_names(loaded.outlets);
  const Selection selection = select_relevant(loaded.built.headlines, lexicon, cfg.selection);

  for (const auto& name : cfg.centroid_outlets) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw ConfigError(fmt::format("centroid outlet '{}' is not in the outlet config", name));
    }
  }
  const std::vector<std::string> centroid_outlets = cfg.centroid_outlets.empty() ? names : cfg.centroid_outlets;

  // Units in (topic, year) order.
  struct UnitWork {
    Topic topic;
    int year;
    std::vector<Headline> bucket;
    UnitStatus status;
    std::optional<CaEmbedding> embedding;
    std::map<std::string, std::string> files;
  };
  const auto years = cfg.years();
  std::vector<UnitWork> units;
  std::map<Topic, std::map<int, std::vector<Headline>>> by_topic_year;
  for (Topic topic : cfg.topics) {
    auto& per_year = by_topic_year[topic];
    if (auto it = selection.buckets.find(topic); it != selection.buckets.end()) {
      for (const auto& h : it->second) per_year[h.year].push_back(h);
    }
    for (int year : years) {
      UnitWork w{topic, year, {}, {}, std::nullopt, {}};
      if (auto it = per_year.find(year); it != per_year.end()) w.bucket = it->second;
      units.push_back(std::move(w));
    }
  }

  const TableOptions table_options{cfg.inclusion_threshold, cfg.counting};
  parallel_for(units.size(), cfg.jobs, [&](std::size_t i) {
    auto& w = units[i];
    const UnitId unit{w.topic, w.year};
    w.status.topic = w.topic;
    w.status.year = w.year;
    if (w.bucket.empty()) {
      w.status.status = "degenerate";
      w.status.reason = "no relevant headlines";
      return;
    }
    const std::string dir = unit_dir(w.topic, w.year);
    const TableResult tr = build_table(w.bucket, unit, names, table_options);
    w.status.rows = tr.table.rows().size();
    w.status.columns = tr.table.columns().size();
    w.status.dropped_columns = tr.dropped_columns;
    std::ostringstream table_csv;
    tr.table.write_csv(table_csv);
    w.files[dir + "/table.csv"] = table_csv.str();
    if (tr.degenerate) {
      w.status.status = "degenerate";
      w.status.reason = tr.reason;
      return;
    }
    try {
      CaEmbedding emb = ca_embed(tr.table);
      std::ostringstream embedding_csv, scree_csv;
      write_embedding_csv(embedding_csv, emb, loaded.outlets);
      write_scree_csv(scree_csv, emb);
      w.files[dir + "/embedding.csv"] = embedding_csv.str();
      w.files[dir + "/scree.csv"] = scree_csv.str();
      w.files[dir + "/scatter.svg"] = render_scatter(emb, loaded.outlets);
      w.status.status = "ok";
      w.status.total_inertia = emb.total_inertia;
      w.status.explained_2d = emb.explained_2d;
      w.embedding = std::move(emb);
    } catch (const NumericError& e) {
      w.status.status = "failed";
      w.status.reason = e.what();
      log::warn(fmt::format("{}: {}", unit.str(), e.what()));
    }
  });

  std::map<std::string, std::string> files;
  AnalyzeSummary summary;
  std::map<Topic, std::map<int, CaEmbedding>> embeddings;
  for (auto& w : units) {
    files.merge(w.files);
    if (w.embedding) embeddings[w.topic].emplace(w.year, std::move(*w.embedding));
    summary.units.push_back(std::move(w.status));
  }

  const SeriesOptions series_options{cfg.cluster_threshold, cfg.mad_variant};
  std::vector<DiscrepancySeries> mad_overlay;
  for (Topic topic : cfg.topics) {
    const auto& per_year = by_topic_year[topic];
    if (per_year.empty()) continue;
    const std::string key(topic_key(topic));

    const std::vector<int> topk_years = cfg.topk_years.empty() ? years : cfg.topk_years;
    for (int year : topk_years) {
      const auto it = per_year.find(year);
      if (it == per_year.end()) continue;
      std::vector<TopKTable> tables;
      tables.push_back(top_k(it->second, {topic, year, std::nullopt}, cfg.top_k, cfg.counting));
      for (const auto& name : names) tables.push_back(top_k(it->second, {topic, year, name}, cfg.top_k, cfg.counting));
      files[fmt::format("{}/topk_{}.md", key, year)] =
          render_markdown(tables, annotations.empty() ? nullptr : &annotations);
    }

    const auto& topic_embeddings = embeddings[topic];
    auto emit_series = [&](const DiscrepancySeries& series, const std::string& stem) {
      std::ostringstream csv;
      write_series_csv(csv, std::span(&series, 1));
      files[fmt::format("{}/{}.csv", key, stem)] = csv.str();
      if (series.present() > 0) files[fmt::format("{}/{}.svg", key, stem)] = render_series(std::span(&series, 1));
    };
    auto mad = build_series(topic, years, topic_embeddings, SeriesKind::ClusterMad, {}, series_options);
    emit_series(mad, "series_mad");
    if (mad.present() > 0) mad_overlay.push_back(std::move(mad));
    for (const auto& name : centroid_outlets) {
      emit_series(build_series(topic, years, topic_embeddings, SeriesKind::CentroidDistance, name, series_options),
                  "series_centroid_" + name);
    }
  }
  if (!mad_overlay.empty()) {
    files["series_mad_all.svg"] = render_series(mad_overlay, {800.0, 600.0, "Cluster dispersion by topic"});
  }

  json manifest;
  manifest["tool"] = "mediadisc";
  manifest["config"] = cfg.echo();
  json inputs = json::object();
  auto hash_input = [&](std::string_view name, const fs::path& p) {
    if (!p.empty()) inputs[std::string(name)] = {{"file", p.filename().string()}, {"sha256", sha256_file(p)}};
  };
  hash_input("corpus", cfg.corpus);
  hash_input("outlets", cfg.outlets);
  hash_input("stoplist", cfg.stoplist);
  hash_input("lemma_exceptions", cfg.lemma_exceptions);
  hash_input("lexicon", cfg.lexicon);
  hash_input("annotations", cfg.annotations);
  manifest["inputs"] = inputs;
  manifest["ingest"] = {{"rows", loaded.ingest.rows_seen()},
                        {"accepted", loaded.ingest.records.size()},
                        {"skipped", loaded.ingest.skipped.size()},
                        {"out_of_range", loaded.ingest.out_of_range},
                        {"empty_after_preprocessing", loaded.built.dropped_empty},
                        {"headlines", loaded.built.headlines.size()}};
  json per_topic = json::object();
  for (Topic topic : cfg.topics) {
    std::size_t headlines = 0;
    if (auto it = selection.buckets.find(topic); it != selection.buckets.end()) headlines = it->second.size();
    per_topic[std::string(topic_key(topic))] = {{"lexicon_bigrams", lexicon.count(topic)},
                                                {"headlines", headlines}};
  }
  manifest["selection"] = {{"relevant_headlines", selection.selected},
                           {"multi_topic_headlines", selection.multi_topic},
                           {"lexicon_entries", lexicon.size()},
                           {"lexicon_unlabeled_rows", lexicon_report.unlabeled},
                           {"topics", per_topic}};
  json unit_list = json::array();
  for (const auto& u : summary.units) {
    json j = {{"topic", std::string(topic_key(u.topic))}, {"year", u.year}, {"status", u.status}};
    if (!u.reason.empty()) j["reason"] = u.reason;
    if (u.rows + u.columns > 0) {
      j["rows"] = u.rows;
      j["columns"] = u.columns;
      j["dropped_columns"] = u.dropped_columns;
    }
    if (u.status == "ok") {
      j["total_inertia"] = u.total_inertia;
      j["explained_2d"] = u.explained_2d;
    }
    unit_list.push_back(std::move(j));
  }
  manifest["units"] = unit_list;

  json hashes = json::object();
  for (const auto& [rel, content] : files) {
    write_text(cfg.out_dir / rel, content);
    hashes[rel] = sha256_hex(content);
    summary.outputs.push_back(rel);
  }
  manifest["outputs"] = hashes;
  write_text(cfg.out_dir / kManifestName, manifest.dump(2) + "\n");

  std::size_t ok = 0, degenerate = 0, failed = 0;
  for (const auto& u : summary.units) {
    ok += u.status == "ok";
    degenerate += u.status == "degenerate";
    failed += u.status == "failed";
  }
  out << fmt::format("{} headlines, {} relevant; units: {} analysed, {} degenerate, {} failed; {} files written\n",
                     loaded.built.headlines.size(), selection.selected, ok, degenerate, failed, files.size());
  return summary;
}

bool VerifyReport::ok() const {
  return std::all_of(units.begin(), units.end(), [](const UnitCheck& u) { return u.passed(); });
}

namespace {

json read_manifest(const fs::path& out_dir) {
  const auto text = read_text(out_dir / kManifestName);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(fmt::format("{}: {}", (out_dir / kManifestName).string(), e.what()));
  }
}

struct ManifestUnit {
  UnitId unit;
  std::string status;
  std::string reason;
};

std::vector<ManifestUnit> manifest_units(const json& manifest) {
  std::vector<ManifestUnit> units;
  try {
    for (const auto& j : manifest.at("units")) {
      const auto topic = parse_topic(j.at("topic").get<std::string>());
      if (!topic) throw DataError("run_manifest.json: unknown topic in unit list");
      units.push_back({UnitId{*topic, j.at("year").get<int>()}, j.at("status").get<std::string>(),
                       j.value("reason", std::string{})});
    }
  } catch (const json::exception& e) {
    throw DataError(fmt::format("run_manifest.json: {}", e.what()));
  }
  return units;
}

template <typename T, typename Reader>
T read_with(const fs::path& path, Reader reader) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("missing output '{}'", path.string()));
  return reader(in);
}

}  // namespace

VerifyReport run_verify(const RunConfig& cfg, std::ostream& out) {
  validate(cfg, Stage::Verify);
  const json manifest = read_manifest(cfg.out_dir);
  VerifyReport report;

  for (const auto& mu : manifest_units(manifest)) {
    UnitCheck check;
    check.unit = mu.unit.str();
    if (mu.status != "ok") {
      check.skipped = true;
      check.reason = fmt::format("{}: {}", mu.status, mu.reason);
      report.units.push_back(std::move(check));
      continue;
    }
    const fs::path dir = cfg.out_dir / unit_dir(mu.unit.topic, mu.unit.year);
    std::vector<std::string> failures;
    try {
      const auto table = read_with<ContingencyTable>(
          dir / "table.csv", [&](std::istream& in) { return ContingencyTable::read_csv(in, mu.unit); });
      const auto rows = read_with<std::vector<EmbeddingRow>>(dir / "embedding.csv",
                                                             [](std::istream& in) { return read_embedding_csv(in); });
      const auto scree = read_with<std::vector<double>>(dir / "scree.csv",
                                                        [](std::istream& in) { return read_scree_csv(in); });
      const CaEmbedding emb = ca_embed(table);

      // Total inertia from the stored spectrum against the chi-square statistic.
      const double chi2 = chi_square_stat(table);
      double inertia = 0.0;
      for (double s : scree) inertia += s * s;
      check.inertia_residual = std::abs(inertia * static_cast<double>(table.grand_total()) - chi2);
      if (check.inertia_residual > scaled_tolerance(1e-10, chi2)) {
        failures.push_back(fmt::format("inertia * n differs from chi-square by {:.3g}", check.inertia_residual));
      }
      const std::size_t common = std::min(scree.size(), emb.singular_values.size());
      double sigma_diff = scree.size() == emb.singular_values.size() ? 0.0 : 1.0;
      for (std::size_t d = 0; d < common; ++d) {
        sigma_diff = std::max(sigma_diff, std::abs(scree[d] - emb.singular_values[d]));
      }
      if (sigma_diff > 1e-9) failures.push_back(fmt::format("scree.csv differs from recomputed spectrum by {:.3g}", sigma_diff));

      // Stored coordinates against the recomputation, and their mass-weighted centering.
      const auto& masses = emb.column_masses;
      double cx = 0.0, cy = 0.0;
      if (rows.size() != table.columns().size()) {
        failures.push_back(fmt::format("embedding.csv has {} outlets, table has {}", rows.size(), table.columns().size()));
      } else {
        for (const auto& row : rows) {
          const auto j = emb.outlet_points.index_of(row.outlet);
          if (!j) {
            failures.push_back(fmt::format("embedding.csv lists outlet '{}' absent from table.csv", row.outlet));
            continue;
          }
          const Point2 want = emb.outlet_points.points[*j];
          check.coordinate_residual = std::max(
              {check.coordinate_residual, std::abs(row.point.x - want.x), std::abs(row.point.y - want.y)});
          cx += masses[*j] * row.point.x;
          cy += masses[*j] * row.point.y;
        }
        check.centering_residual = std::max(std::abs(cx), std::abs(cy));
        if (check.coordinate_residual > 1e-9) {
          failures.push_back(fmt::format("embedding.csv differs from recomputed coordinates by {:.3g}",
                                         check.coordinate_residual));
        }
        if (check.centering_residual > 1e-10) {
          failures.push_back(fmt::format("mass-weighted centroid is off the origin by {:.3g}", check.centering_residual));
        }
      }

      // Full-dimensional Euclidean distances against chi-square distances
      // between column profiles.
      const auto col_totals = table.column_totals();
      const auto row_totals = table.row_totals();
      const double n = static_cast<double>(table.grand_total());
      const std::size_t I = table.rows().size(), J = table.columns().size();
      const Matrix& G = emb.column_coordinates;
      for (std::size_t a = 0; a < J; ++a) {
        for (std::size_t b = a + 1; b < J; ++b) {
          double chi = 0.0;
          for (std::size_t i = 0; i < I; ++i) {
            const double pa = static_cast<double>(table.at(i, a)) / static_cast<double>(col_totals[a]);
            const double pb = static_cast<double>(table.at(i, b)) / static_cast<double>(col_totals[b]);
            chi += (pa - pb) * (pa - pb) / (static_cast<double>(row_totals[i]) / n);
          }
          double euclid = 0.0;
          for (std::size_t d = 0; d < G.cols(); ++d) euclid += (G(a, d) - G(b, d)) * (G(a, d) - G(b, d));
          check.distance_residual = std::max(check.distance_residual, std::abs(std::sqrt(chi) - std::sqrt(euclid)));
        }
      }
      if (check.distance_residual > 1e-9) {
        failures.push_back(fmt::format("chi-square distances not preserved (max error {:.3g})", check.distance_residual));
      }
    } catch (const DataError& e) {
      failures.push_back(e.what());
    } catch (const NumericError& e) {
      failures.push_back(e.what());
    }
    for (std::size_t k = 0; k < failures.size(); ++k) check.reason += (k ? "; " : "") + failures[k];
    report.units.push_back(std::move(check));
  }

  std::size_t passed = 0, skipped = 0, failed = 0;
  for (const auto& u : report.units) {
    if (u.skipped) {
      ++skipped;
      out << fmt::format("SKIP {}  ({})\n", u.unit, u.reason);
    } else if (u.passed()) {
      ++passed;
      out << fmt::format("OK   {}  inertia {:.2e}  centering {:.2e}  distance {:.2e}  coords {:.2e}\n", u.unit,
                         u.inertia_residual, u.centering_residual, u.distance_residual, u.coordinate_residual);
    } else {
      ++failed;
      out << fmt::format("FAIL {}  {}\n", u.unit, u.reason);
    }
  }
  out << fmt::format("{} passed, {} failed, {} skipped\n", passed, failed, skipped);
  return report;
}

std::size_t run_report(const RunConfig& cfg, std::ostream& out) {
  validate(cfg, Stage::Report);
  const json manifest = read_manifest(cfg.out_dir);
  std::size_t rendered = 0;

  for (const auto& mu : manifest_units(manifest)) {
    if (mu.status != "ok") continue;
    const fs::path dir = cfg.out_dir / unit_dir(mu.unit.topic, mu.unit.year);
    const auto rows = read_with<std::vector<EmbeddingRow>>(dir / "embedding.csv",
                                                           [](std::istream& in) { return read_embedding_csv(in); });
    CaEmbedding emb;
    emb.unit = mu.unit;
    emb.singular_values = read_with<std::vector<double>>(dir / "scree.csv",
                                                         [](std::istream& in) { return read_scree_csv(in); });
    for (double s : emb.singular_values) emb.total_inertia += s * s;
    std::vector<OutletInfo> outlets;
    for (const auto& row : rows) {
      emb.outlet_points.outlets.push_back(row.outlet);
      emb.outlet_points.points.push_back(row.point);
      if (const auto leaning = parse_leaning(row.leaning)) outlets.push_back({row.outlet, *leaning});
    }
    if (rows.empty()) throw DataError(fmt::format("'{}' has no rows", (dir / "embedding.csv").string()));
    write_text(dir / "scatter.svg", render_scatter(emb, outlets));
    ++rendered;
  }

  std::vector<DiscrepancySeries> mad_overlay;
  std::vector<std::string> topic_dirs;
  for (const auto& topic_name : manifest.at("config").at("run").at("topics")) {
    topic_dirs.push_back(topic_name.get<std::string>());
  }
  for (const auto& key : topic_dirs) {
    const fs::path dir = cfg.out_dir / key;
    if (!fs::is_directory(dir)) continue;
    std::vector<fs::path> csvs;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const auto name = entry.path().filename().string();
      if (entry.is_regular_file() && name.starts_with("series_") && entry.path().extension() == ".csv") {
        csvs.push_back(entry.path());
      }
    }
    std::sort(csvs.begin(), csvs.end());
    for (const auto& csv : csvs) {
      const auto series = read_with<std::vector<DiscrepancySeries>>(
          csv, [](std::istream& in) { return read_series_csv(in); });
      auto svg_path = csv;
      svg_path.replace_extension(".svg");
      const bool any = std::any_of(series.begin(), series.end(), [](const auto& s) { return s.present() > 0; });
      if (!any) continue;
      write_text(svg_path, render_series(series));
      ++rendered;
      if (csv.filename() == "series_mad.csv") {
        for (const auto& s : series) {
          if (s.present() > 0) mad_overlay.push_back(s);
        }
      }
    }
  }
  if (!mad_overlay.empty()) {
    write_text(cfg.out_dir / "series_mad_all.svg",
               render_series(mad_overlay, {800.0, 600.0, "Cluster dispersion by topic"}));
    ++rendered;
  }
  out << fmt::format("{} figures rendered under {}\n", rendered, cfg.out_dir.string());
  return rendered;
}

}  // namespace mediadisc::tools

namespace mediadisc::tools {

void run_synth(const SynthOptions& options, const fs::path& dir, std::ostream& out) {
  SyntheticCorpusOptions corpus_options;
  corpus_options.seed = options.seed;
  corpus_options.headlines = options.headlines;
  const SyntheticCorpus corpus = generate_synthetic_corpus(corpus_options);

  std::string jsonl;
  for (const auto& r : corpus.records) {
    jsonl += json{{"outlet", r.outlet}, {"date", r.date.iso()}, {"title", r.title}}.dump();
    jsonl += '\n';
  }
  json outlets = json::array();
  for (const auto& o : corpus.outlets) outlets.push_back({{"name", o.name}, {"leaning", std::string(to_string(o.leaning))}});

  const std::string config = fmt::format(
      "# Synthetic corpus generated with seed {0}, {1} headlines.\n"
      "[inputs]\n"
      "corpus = corpus.jsonl\n"
      "outlets = outlets.json\n"
      "lexicon = lexicon.tsv\n"
      "\n"
      "[run]\n"
      "years = 2014..2022\n"
      "mining_threshold = 100\n"
      "# The synthetic corpus is far smaller than a real headline archive, so\n"
      "# the per-outlet inclusion cut is scaled down with it.\n"
      "inclusion_threshold = 5\n"
      "top_k = 10\n"
      "cluster_threshold = auto\n"
      "centroid_outlets = cnn, wsj\n"
      "\n"
      "[output]\n"
      "dir = out\n"
      "jobs = 1\n",
      options.seed, options.headlines);

  write_text(dir / "corpus.jsonl", jsonl);
  write_text(dir / "outlets.json", outlets.dump(2) + "\n");
  write_text(dir / "lexicon.tsv", corpus.lexicon_tsv);
  write_text(dir / "config.ini", config);
  out << fmt::format("wrote {} headlines for {} outlets to {}\n", corpus.records.size(), corpus.outlets.size(),
                     dir.string());
}

}  // namespace mediadisc::tools
