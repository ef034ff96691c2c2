#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "mediadisc/ca.hpp"
#include "mediadisc/error.hpp"
#include "mediadisc/lexicon.hpp"
#include "mediadisc/tools/config.hpp"
#include "mediadisc/tools/pipeline.hpp"

using namespace mediadisc;
using namespace mediadisc::tools;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mediadisc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json read_json(const fs::path& p) { return json::parse(fixture::read_file(p)); }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

// One small synthetic corpus shared by the suite; each test copies what it
// changes.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_dir_ = new fixture::TempDir("cli_corpus");
    std::ostringstream sink;
    run_synth({7, 9000}, corpus_dir_->path(), sink);
  }
  static void TearDownTestSuite() {
    delete corpus_dir_;
    corpus_dir_ = nullptr;
  }

  fs::path data(const std::string& name) const { return corpus_dir_->path() / name; }
  std::string config() const { return data("config.ini").string(); }

  std::vector<Headline> headlines() const {
    std::ifstream in(data("corpus.jsonl"));
    const auto ingested = ingest(in, InputFormat::JsonLines);
    return build_headlines(ingested.records, default_outlets(), Preprocessor{}).headlines;
  }

  fixture::TempDir out_{"cli_out"};
  static fixture::TempDir* corpus_dir_;
};

fixture::TempDir* CliTest::corpus_dir_ = nullptr;

}  // namespace

TEST(Config, ParsesSectionsAndResolvesPaths) {
  std::istringstream in(
      "# comment\n[inputs]\ncorpus = c.jsonl\noutlets = /abs/outlets.json\n"
      "[run]\nyears = 2016..2018\ntopics = foreign, social\nmining_threshold = 7\ninclusion_threshold = 3\n"
      "top_k = 4\ncluster_threshold = 0.25\ncounting = headlines\nmad_variant = major\nselection = first\n"
      "[output]\ndir = results\njobs = 3\n");
  const auto cfg = parse_config(in, "/base");
  EXPECT_EQ(cfg.corpus, fs::path("/base/c.jsonl"));
  EXPECT_EQ(cfg.outlets, fs::path("/abs/outlets.json"));
  EXPECT_EQ(cfg.years(), (std::vector<int>{2016, 2017, 2018}));
  EXPECT_EQ(cfg.topics, (std::vector<Topic>{Topic::ForeignAffairs, Topic::SocialIssue}));
  EXPECT_EQ(cfg.mining_threshold, 7u);
  EXPECT_EQ(cfg.inclusion_threshold, 3u);
  EXPECT_EQ(cfg.top_k, 4u);
  EXPECT_EQ(cfg.cluster_threshold, 0.25);
  EXPECT_EQ(cfg.counting, CountingMode::Headlines);
  EXPECT_EQ(cfg.mad_variant, MadVariant::MajorCluster);
  EXPECT_EQ(cfg.selection, SelectionMode::FirstMatch);
  EXPECT_EQ(cfg.out_dir, fs::path("/base/results"));
  EXPECT_EQ(cfg.jobs, 3u);
}

TEST(Config, DefaultsCarryPublishedConstants) {
  const RunConfig cfg;
  EXPECT_EQ(cfg.mining_threshold, 100u);
  EXPECT_EQ(cfg.inclusion_threshold, 50u);
  EXPECT_EQ(cfg.top_k, 10u);
  EXPECT_EQ(cfg.years().front(), 2014);
  EXPECT_EQ(cfg.years().back(), 2022);
  EXPECT_FALSE(cfg.cluster_threshold.has_value());
  EXPECT_EQ(cfg.topics.size(), 4u);
}

TEST(Config, RejectsBadInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
  };
  EXPECT_THROW(parse("[run]\nnope = 1\n"), ConfigError);
  EXPECT_THROW(parse("[elsewhere]\n"), ConfigError);
  EXPECT_THROW(parse("[run]\nyears = 2018..2016\n"), ConfigError);
  EXPECT_THROW(parse("[run]\ntopics = sports\n"), ConfigError);
  EXPECT_THROW(parse("[run]\ntop_k = ten\n"), ConfigError);
  EXPECT_THROW(parse("[run]\ncounting = tokens\n"), ConfigError);
  EXPECT_THROW(parse("[run]\ncluster_threshold = -1\n"), ConfigError);
  EXPECT_THROW(parse("corpus = x\n"), ConfigError);
}

TEST(Config, ValidateListsEveryProblem) {
  RunConfig cfg;
  cfg.corpus = "/nonexistent/corpus.jsonl";
  cfg.outlets = "/nonexistent/outlets.json";
  cfg.mining_threshold = 0;
  try {
    validate(cfg, Stage::Analyze);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("corpus.jsonl"), std::string::npos) << msg;
    EXPECT_NE(msg.find("outlets.json"), std::string::npos) << msg;
    EXPECT_NE(msg.find("lexicon"), std::string::npos) << msg;
    EXPECT_NE(msg.find("threshold"), std::string::npos) << msg;
  }
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"mine", "--top-k", "many"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CliTest, MissingCorpusExitsTwoWithoutOutputs) {
  const fs::path out = out_.path() / "run";
  const auto r = cli({"--config", config(), "--corpus", (out_.path() / "missing.jsonl").string(), "--out", out.string(),
                      "mine"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing.jsonl"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, MalformedCorpusExitsThree) {
  const fs::path bad = out_.path() / "bad.jsonl";
  std::string text;
  for (int i = 0; i < 20; ++i) text += "{\"outlet\":\"cnn\",\"date\":\"2020-01-01\",\"title\":\"x\n";
  fixture::write_file(bad, text);
  const fs::path out = out_.path() / "run";
  const auto r = cli({"--config", config(), "--corpus", bad.string(), "--out", out.string(), "mine"});
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST_F(CliTest, IngestCheckSummarises) {
  const auto r = cli({"--config", config(), "ingest-check"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("9000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("cnn"), std::string::npos);
}

TEST_F(CliTest, MineReportMatchesRecount) {
  const fs::path out = out_.path() / "mine";
  const auto r = cli({"--config", config(), "--out", out.string(), "--mining-threshold", "40", "mine"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = lines_of(fixture::read_file(out / "mining_report.csv"));
  ASSERT_FALSE(report.empty());
  EXPECT_EQ(report[0], "bigram,year,count");

  const auto recount = oracle::recount_bigrams(headlines());
  std::set<std::string> candidates;
  for (const auto& [year, counts] : recount) {
    for (const auto& [gram, count] : counts) {
      if (count >= 40) candidates.insert(gram);
    }
  }
  std::set<std::string> expected_rows;
  for (const auto& gram : candidates) {
    for (const auto& [year, counts] : recount) {
      if (auto it = counts.find(gram); it != counts.end()) {
        expected_rows.insert(gram + "," + std::to_string(year) + "," + std::to_string(it->second));
      }
    }
  }
  const std::set<std::string> rows(report.begin() + 1, report.end());
  EXPECT_EQ(rows.size(), report.size() - 1);
  EXPECT_EQ(rows, expected_rows);
}

TEST_F(CliTest, ThresholdOneSkeletonHasEveryBigram) {
  const fs::path out = out_.path() / "mine";
  ASSERT_EQ(cli({"--config", config(), "--out", out.string(), "--mining-threshold", "1", "mine"}).code, 0);
  std::set<std::string> skeleton;
  for (const auto& line : lines_of(fixture::read_file(out / "lexicon_skeleton.tsv"))) {
    if (line.empty() || line[0] == '#') continue;
    ASSERT_EQ(line.back(), '\t') << line;
    skeleton.insert(line.substr(0, line.size() - 1));
  }
  std::set<std::string> expected;
  for (const auto& [year, counts] : oracle::recount_bigrams(headlines())) {
    for (const auto& [gram, count] : counts) expected.insert(gram);
  }
  EXPECT_EQ(skeleton, expected);

  // An unlabeled skeleton loads as an empty lexicon.
  std::ifstream in(out / "lexicon_skeleton.tsv");
  LexiconLoadReport report;
  EXPECT_TRUE(load_lexicon(in, Preprocessor{}, &report).empty());
  EXPECT_EQ(report.unlabeled, expected.size());
}

TEST_F(CliTest, AnalyzeManifestCoversEveryUnit) {
  const fs::path out = out_.path() / "a";
  const auto r = cli({"--config", config(), "--out", out.string(), "analyze"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto manifest = read_json(out / "run_manifest.json");
  ASSERT_EQ(manifest["units"].size(), 36u);
  std::set<std::pair<std::string, int>> seen;
  std::size_t ok = 0;
  for (const auto& u : manifest["units"]) {
    seen.emplace(u["topic"].get<std::string>(), u["year"].get<int>());
    const fs::path dir = out / u["topic"].get<std::string>() / std::to_string(u["year"].get<int>());
    if (u["status"] == "ok") {
      ++ok;
      EXPECT_TRUE(fs::exists(dir / "embedding.csv")) << dir;
      EXPECT_TRUE(fs::exists(dir / "scree.csv")) << dir;
      EXPECT_TRUE(fs::exists(dir / "scatter.svg")) << dir;
    }
  }
  EXPECT_EQ(seen.size(), 36u);
  EXPECT_GT(ok, 30u);

  // Every output is listed with its hash, and nothing unlisted was written.
  std::set<std::string> listed;
  for (const auto& [rel, hash] : manifest["outputs"].items()) {
    listed.insert(rel);
    EXPECT_EQ(hash.get<std::string>(), sha256_file(out / rel)) << rel;
  }
  for (const auto& [rel, bytes] : fixture::snapshot(out)) {
    if (rel != "run_manifest.json") {
      EXPECT_TRUE(listed.contains(rel)) << rel;
    }
  }
  EXPECT_EQ(manifest["config"]["run"]["inclusion_threshold"], 5);
  EXPECT_EQ(manifest["inputs"]["corpus"]["sha256"], sha256_file(data("corpus.jsonl")));
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  const fs::path out = out_.path() / "a";
  const auto r = cli({"--config", config(), "--out", out.string(), "--years", "2020..2021", "--topics", "economic",
                      "--inclusion-threshold", "8", "--cluster-threshold", "0.5", "analyze"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto manifest = read_json(out / "run_manifest.json");
  EXPECT_EQ(manifest["units"].size(), 2u);
  EXPECT_EQ(manifest["config"]["run"]["inclusion_threshold"], 8);
  EXPECT_EQ(manifest["config"]["run"]["cluster_threshold"], 0.5);
  EXPECT_TRUE(fs::exists(out / "economic" / "2021" / "table.csv"));
  EXPECT_FALSE(fs::exists(out / "foreign"));
}

TEST_F(CliTest, RerunsAndJobCountsAreByteIdentical) {
  const fs::path a = out_.path() / "a";
  const fs::path b = out_.path() / "b";
  const fs::path c = out_.path() / "c";
  ASSERT_EQ(cli({"--config", config(), "--out", a.string(), "--jobs", "1", "analyze"}).code, 0);
  ASSERT_EQ(cli({"--config", config(), "--out", b.string(), "--jobs", "1", "analyze"}).code, 0);
  ASSERT_EQ(cli({"--config", config(), "--out", c.string(), "--jobs", "6", "analyze"}).code, 0);
  const auto sa = fixture::snapshot(a);
  EXPECT_EQ(sa, fixture::snapshot(b));
  EXPECT_EQ(sa, fixture::snapshot(c));
}

TEST_F(CliTest, TopicWithoutLexiconEntriesIsIsolated) {
  const fs::path full = out_.path() / "full";
  ASSERT_EQ(cli({"--config", config(), "--out", full.string(), "analyze"}).code, 0);

  std::string trimmed;
  for (const auto& line : lines_of(fixture::read_file(data("lexicon.tsv")))) {
    if (!line.ends_with("\tsocial")) trimmed += line + "\n";
  }
  const fs::path lexicon = out_.path() / "no_social.tsv";
  fixture::write_file(lexicon, trimmed);
  const fs::path part = out_.path() / "part";
  ASSERT_EQ(cli({"--config", config(), "--lexicon", lexicon.string(), "--out", part.string(), "analyze"}).code, 0);

  const auto manifest = read_json(part / "run_manifest.json");
  for (const auto& u : manifest["units"]) {
    if (u["topic"] == "social") {
      EXPECT_EQ(u["status"], "degenerate");
    } else {
      EXPECT_EQ(u["status"], "ok") << u.dump();
    }
  }
  EXPECT_FALSE(fs::exists(part / "social"));
  const auto a = fixture::snapshot(full);
  const auto b = fixture::snapshot(part);
  for (const auto& [rel, bytes] : b) {
    if (rel.starts_with("foreign/") || rel.starts_with("domestic/") || rel.starts_with("economic/")) {
      EXPECT_EQ(bytes, a.at(rel)) << rel;
    }
  }
}

TEST_F(CliTest, SingleTopicCorpusWritesOnlyThatTopic) {
  // Keep the raw records whose headline matches only foreign-affairs phrases.
  std::ifstream lex_in(data("lexicon.tsv"));
  const Preprocessor pre;
  const auto lexicon = load_lexicon(lex_in, pre);
  std::ifstream corpus_in(data("corpus.jsonl"));
  const auto records = ingest(corpus_in, InputFormat::JsonLines).records;
  std::string subset;
  for (const auto& rec : records) {
    const std::vector<Headline> one = {{rec.outlet, rec.date.year, pre(rec.title)}};
    const auto sel = select_relevant(one, lexicon);
    if (sel.buckets.size() == 1 && sel.buckets.contains(Topic::ForeignAffairs)) {
      subset += json{{"outlet", rec.outlet}, {"date", rec.date.iso()}, {"title", rec.title}}.dump() + "\n";
    }
  }
  const fs::path corpus = out_.path() / "foreign.jsonl";
  fixture::write_file(corpus, subset);
  const fs::path out = out_.path() / "iso";
  const auto r = cli({"--config", config(), "--corpus", corpus.string(), "--out", out.string(), "analyze"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& [rel, bytes] : fixture::snapshot(out)) {
    if (rel == "run_manifest.json" || rel == "series_mad_all.svg") continue;
    EXPECT_TRUE(rel.starts_with("foreign/")) << rel;
  }
  EXPECT_TRUE(fs::exists(out / "foreign" / "2018" / "embedding.csv"));
}

TEST_F(CliTest, VerifyPassesThenFlagsTampering) {
  const fs::path out = out_.path() / "v";
  ASSERT_EQ(cli({"--config", config(), "--out", out.string(), "--inclusion-threshold", "8", "analyze"}).code, 0);
  const auto clean = cli({"--config", config(), "--out", out.string(), "verify"});
  EXPECT_EQ(clean.code, 0) << clean.out << clean.err;

  // Degenerate units are reported as skipped, not failed.
  const auto manifest = read_json(out / "run_manifest.json");
  std::size_t degenerate = 0;
  for (const auto& u : manifest["units"]) degenerate += u["status"] == "degenerate";
  ASSERT_GT(degenerate, 0u) << "threshold 8 should leave some units degenerate";
  EXPECT_NE(clean.out.find("SKIP"), std::string::npos);

  // Nudge one coordinate of one unit.
  std::string victim;
  for (const auto& u : manifest["units"]) {
    if (u["status"] == "ok") {
      victim = u["topic"].get<std::string>() + "/" + std::to_string(u["year"].get<int>());
      break;
    }
  }
  ASSERT_FALSE(victim.empty());
  const fs::path emb_path = out / victim / "embedding.csv";
  std::istringstream in(fixture::read_file(emb_path));
  auto rows = read_embedding_csv(in);
  rows[1].point.x += 1e-4;
  std::string text = "outlet,dim1,dim2,leaning\n";
  for (const auto& row : rows) {
    text += row.outlet + "," + format_real(row.point.x) + "," + format_real(row.point.y) + "," + row.leaning + "\n";
  }
  fixture::write_file(emb_path, text);

  RunConfig cfg = load_config_file(config());
  cfg.out_dir = out;
  std::ostringstream sink;
  const auto report = run_verify(cfg, sink);
  EXPECT_FALSE(report.ok());
  std::size_t failed = 0;
  for (const auto& u : report.units) {
    if (u.passed()) continue;
    ++failed;
    EXPECT_EQ(u.unit, victim.substr(0, victim.find('/')) + "_" + victim.substr(victim.find('/') + 1));
    EXPECT_GT(u.coordinate_residual, 1e-5);
  }
  EXPECT_EQ(failed, 1u);
  EXPECT_EQ(cli({"--config", config(), "--out", out.string(), "verify"}).code, 4);
}

TEST_F(CliTest, ReportReRendersIdenticalFigures) {
  const fs::path out = out_.path() / "r";
  ASSERT_EQ(cli({"--config", config(), "--out", out.string(), "analyze"}).code, 0);
  const auto before = fixture::snapshot(out);
  std::size_t removed = 0;
  for (const auto& [rel, bytes] : before) {
    if (rel.ends_with(".svg")) {
      fs::remove(out / rel);
      ++removed;
    }
  }
  ASSERT_GT(removed, 0u);
  const auto r = cli({"--config", config(), "--out", out.string(), "report"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(fixture::snapshot(out), before);
}

TEST_F(CliTest, VerifyAndReportNeedAnAnalyzeRun) {
  const fs::path out = out_.path() / "empty";
  EXPECT_EQ(cli({"--config", config(), "--out", out.string(), "verify"}).code, 2);
  EXPECT_EQ(cli({"--config", config(), "--out", out.string(), "report"}).code, 2);
}

TEST(CliSynth, BundledCorpusMatchesGenerator) {
  // The checked-in corpus is the generator's output for the documented seed.
  fixture::TempDir dir("synth");
  std::ostringstream sink;
  run_synth({7, 30000}, dir.path(), sink);
  const fs::path bundled = fs::path(MEDIADISC_SOURCE_DIR) / "data" / "synthetic";
  for (const char* name : {"corpus.jsonl", "outlets.json", "lexicon.tsv", "config.ini"}) {
    EXPECT_EQ(sha256_file(dir.path() / name), sha256_file(bundled / name)) << name;
  }
}
