#include <CLI11.hpp>
#include <fmt/format.h>

#include "mediadisc/error.hpp"
#include "mediadisc/log.hpp"
#include "mediadisc/tools/pipeline.hpp"

namespace mediadisc::tools {

namespace {

struct Overrides {
  std::string config;
  std::string corpus, outlets, lexicon, annotations, out;
  std::string years, topics, cluster_threshold, counting, mad_variant, selection;
  std::optional<std::uint64_t> mining_threshold, inclusion_threshold;
  std::optional<std::size_t> top_k, jobs;
  std::optional<std::uint64_t> seed;
};

RunConfig resolve_config(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config_file(o.config);
  if (!o.corpus.empty()) cfg.corpus = o.corpus;
  if (!o.outlets.empty()) cfg.outlets = o.outlets;
  if (!o.lexicon.empty()) cfg.lexicon = o.lexicon;
  if (!o.annotations.empty()) cfg.annotations = o.annotations;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.years.empty()) set_years(cfg, o.years);
  if (!o.topics.empty()) set_topics(cfg, o.topics);
  if (!o.cluster_threshold.empty()) set_cluster_threshold(cfg, o.cluster_threshold);
  if (!o.counting.empty()) set_counting(cfg, o.counting);
  if (!o.mad_variant.empty()) set_mad_variant(cfg, o.mad_variant);
  if (!o.selection.empty()) set_selection(cfg, o.selection);
  if (o.mining_threshold) cfg.mining_threshold = *o.mining_threshold;
  if (o.inclusion_threshold) cfg.inclusion_threshold = *o.inclusion_threshold;
  if (o.top_k) cfg.top_k = *o.top_k;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Outlet discrepancy analysis over news headlines"};
  app.name("mediadisc");
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config, "INI run configuration");
  app.add_option("--corpus", o.corpus, "Headline corpus (.jsonl or .csv)");
  app.add_option("--outlets", o.outlets, "Outlet list with leanings (JSON)");
  app.add_option("--lexicon", o.lexicon, "Topic lexicon (TSV)");
  app.add_option("--annotations", o.annotations, "Highlight categories for top-n-gram tables (TSV)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--years", o.years, "Year range, e.g. 2014..2022");
  app.add_option("--topics", o.topics, "Comma-separated topics: foreign,domestic,economic,social");
  app.add_option("--mining-threshold", o.mining_threshold, "Per-year count for a frequent bigram");
  app.add_option("--inclusion-threshold", o.inclusion_threshold, "An n-gram is kept when some outlet uses it more often");
  app.add_option("--top-k", o.top_k, "Rows per top-n-gram table");
  app.add_option("--cluster-threshold", o.cluster_threshold, "Single-linkage cut distance, or 'auto'");
  app.add_option("--counting", o.counting, "occurrences | headlines");
  app.add_option("--mad-variant", o.mad_variant, "all | major");
  app.add_option("--selection", o.selection, "all | first");
  app.add_option("--jobs", o.jobs, "Worker threads");
  app.add_option("--seed", o.seed, "Seed for synthetic fixture generation");

  auto* ingest_cmd = app.add_subcommand("ingest-check", "Validate and summarise the corpus");
  auto* mine_cmd = app.add_subcommand("mine", "Mine frequent bigrams and write a lexicon skeleton");
  auto* analyze_cmd = app.add_subcommand("analyze", "Build tables, embeddings, metrics and figures");
  auto* verify_cmd = app.add_subcommand("verify", "Re-check analysis outputs against their tables");
  auto* report_cmd = app.add_subcommand("report", "Re-render figures from analysis outputs");
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus and config");
  SynthOptions synth;
  synth_cmd->add_option("--headlines", synth.headlines, "Number of headlines");
  for (auto* sub : {ingest_cmd, mine_cmd, analyze_cmd, verify_cmd, report_cmd, synth_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Config);
  }

  auto previous = log::set_sink([&err](log::Level level, std::string_view message) {
    if (level == log::Level::Warn) err << "warning: " << message << "\n";
  });
  int code = 0;
  try {
    if (synth_cmd->parsed()) {
      if (o.seed) synth.seed = *o.seed;
      run_synth(synth, o.out.empty() ? std::filesystem::path("data/synthetic") : std::filesystem::path(o.out), out);
    } else {
      const RunConfig cfg = resolve_config(o);
      if (ingest_cmd->parsed()) {
        run_ingest_check(cfg, out);
      } else if (mine_cmd->parsed()) {
        run_mine(cfg, out);
      } else if (analyze_cmd->parsed()) {
        run_analyze(cfg, out);
      } else if (verify_cmd->parsed()) {
        if (!run_verify(cfg, out).ok()) code = static_cast<int>(ErrorKind::Numeric);
      } else if (report_cmd->parsed()) {
        run_report(cfg, out);
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    code = e.exit_code();
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    code = 1;
  }
  log::set_sink(std::move(previous));
  return code;
}

}  // namespace mediadisc::tools
