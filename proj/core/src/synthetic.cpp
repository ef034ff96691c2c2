#include "mediadisc/synthetic.hpp"

#include <array>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "mediadisc/lexicon.hpp"

namespace mediadisc {

FixtureRng::FixtureRng(std::uint64_t seed) : state_(seed) {}

// splitmix64
std::uint64_t FixtureRng::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double FixtureRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t FixtureRng::below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("FixtureRng::below(0)");
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

std::size_t FixtureRng::weighted(const std::vector<double>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double target = uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (target < weights[i]) return i;
    target -= weights[i];
  }
  return weights.size() - 1;
}

std::vector<OutletInfo> default_outlets() {
  return {
      {"nyt", Leaning::Left},         {"bloomberg", Leaning::Left}, {"cnn", Leaning::Left},
      {"nbc", Leaning::Left},         {"wsj", Leaning::Central},    {"csm", Leaning::Central},
      {"federalist", Leaning::Right}, {"reason", Leaning::Right},   {"washtimes", Leaning::Right},
  };
}

namespace {

struct Phrase {
  std::string_view lexicon;  // as written in the lexicon file
  std::string_view surface;  // as it appears in titles
};

struct TopicPhrases {
  Topic topic;
  std::array<Phrase, 6> phrases;
  std::array<std::string_view, 4> followers;  // optional third word
};

const std::array<TopicPhrases, 4>& topic_phrases() {
  static const std::array<TopicPhrases, 4> table = {{
      {Topic::ForeignAffairs,
       {{{"ukrainian refugee", "Ukrainian Refugees"},
         {"north korea", "North Korea"},
         {"trade war", "Trade War"},
         {"foreign minister", "Foreign Minister"},
         {"nuclear deal", "Nuclear Deal"},
         {"peace talk", "Peace Talks"}}},
       {"crisis", "summit", "sanction", "border"}},
      {Topic::DomesticPolitics,
       {{{"supreme court", "Supreme Court"},
         {"white house", "White House"},
         {"attorney general", "Attorney General"},
         {"justice department", "Justice Department"},
         {"midterm election", "Midterm Elections"},
         {"capitol riot", "Capitol Riot"}}},
       {"ruling", "hearing", "probe", "result"}},
      {Topic::EconomicIssue,
       {{{"gas price", "Gas Prices"},
         {"interest rate", "Interest Rates"},
         {"stock market", "Stock Market"},
         {"supply chain", "Supply Chain"},
         {"student loan", "Student Loans"},
         {"oil price", "Oil Prices"}}},
       {"hike", "forgiveness", "rally", "shortage"}},
      {Topic::SocialIssue,
       {{{"health law", "Health Law"},
         {"climate change", "Climate Change"},
         {"mass shooting", "Mass Shooting"},
         {"gun control", "Gun Control"},
         {"abortion right", "Abortion Rights"},
         {"hate crime", "Hate Crimes"}}},
       {"bill", "protest", "victim", "activist"}},
  }};
  return table;
}

constexpr std::array<std::string_view, 20> kFiller = {
    "Report", "Says",   "New",   "Plan",   "Week",    "Official", "Vote",   "Debate", "Latest", "Update",
    "Warns",  "Push",   "Fight", "Record", "Poll",    "Big",      "Year",   "Watch",  "Expert", "Question"};

constexpr std::array<std::string_view, 8> kGlue = {"the", "on", "of", "after", "as", "in", "for", "amid"};

std::string styled(std::string_view text, FixtureRng& rng) {
  std::string out(text);
  const double roll = rng.uniform();
  if (roll < 0.1) {
    for (char& c : out) {
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
  } else if (roll < 0.25) {
    for (char& c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
  }
  return out;
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticCorpusOptions& options) {
  if (options.first_year > options.last_year) throw std::invalid_argument("synthetic corpus: empty year range");
  FixtureRng rng(options.seed);
  SyntheticCorpus corpus;
  corpus.outlets = default_outlets();
  const auto& topics = topic_phrases();

  // Outlet-specific phrase preferences per topic.
  std::vector<std::array<std::array<double, 6>, 4>> preference(corpus.outlets.size());
  for (auto& per_topic : preference) {
    for (auto& weights : per_topic) {
      for (double& w : weights) w = 0.3 + rng.uniform();
    }
  }

  const int years = options.last_year - options.first_year + 1;
  corpus.records.reserve(options.headlines);
  for (std::size_t h = 0; h < options.headlines; ++h) {
    const std::size_t outlet = rng.below(corpus.outlets.size());
    const int year = options.first_year + static_cast<int>(rng.below(static_cast<std::size_t>(years)));
    const unsigned month = year == 2022 ? 1 + static_cast<unsigned>(rng.below(9)) : 1 + static_cast<unsigned>(rng.below(12));
    const unsigned day = 1 + static_cast<unsigned>(rng.below(28));

    std::string title;
    auto append = [&](std::string_view word) {
      if (!title.empty()) title.push_back(' ');
      title += word;
    };
    if (rng.uniform() < 0.5) append(kFiller[rng.below(kFiller.size())]);
    if (rng.uniform() >= options.off_topic_fraction) {
      const auto& tp = topics[rng.below(topics.size())];
      std::vector<double> weights(preference[outlet][static_cast<std::size_t>(tp.topic)].begin(),
                                  preference[outlet][static_cast<std::size_t>(tp.topic)].end());
      // One outlet drifts toward its first domestic phrase over time.
      if (tp.topic == Topic::DomesticPolitics && corpus.outlets[outlet].name == "cnn") {
        weights[0] *= 1.0 + 0.6 * (year - options.first_year);
      }
      const auto& phrase = tp.phrases[rng.weighted(weights)];
      if (!title.empty() && rng.uniform() < 0.5) append(kGlue[rng.below(kGlue.size())]);
      append(styled(phrase.surface, rng));
      if (rng.uniform() < 0.35) append(tp.followers[rng.below(tp.followers.size())]);
      if (rng.uniform() < 0.3) title += rng.uniform() < 0.5 ? ":" : ",";
    }
    append(kFiller[rng.below(kFiller.size())]);
    if (rng.uniform() < 0.2) title += rng.uniform() < 0.5 ? "!" : "?";

    corpus.records.push_back({corpus.outlets[outlet].name, Date{year, month, day}, std::move(title)});
  }

  corpus.lexicon_tsv = "# bigram<TAB>topic\n";
  for (const auto& tp : topics) {
    for (const auto& p : tp.phrases) corpus.lexicon_tsv += fmt::format("{}\t{}\n", p.lexicon, topic_key(tp.topic));
  }
  return corpus;
}

}  // namespace mediadisc
