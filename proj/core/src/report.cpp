#include "mediadisc/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "mediadisc/error.hpp"
#include "svg.hpp"

namespace mediadisc {

namespace {

constexpr std::array<std::string_view, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                      "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Frame {
  double left = 70.0;
  double right = 30.0;
  double top = 40.0;
  double bottom = 50.0;
  double width = 800.0;
  double height = 600.0;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return top + (y1 - y) / (y1 - y0) * (height - top - bottom); }
};

// Expands [lo, hi] by 10% of its span on each side.
std::pair<double, double> with_margin(double lo, double hi) {
  double span = hi - lo;
  if (!(span > 0.0)) span = std::max(1.0, std::fabs(lo));
  return {lo - 0.1 * span, hi + 0.1 * span};
}

std::string tick_label(double v) {
  if (std::fabs(v) < 1e-12) return "0";
  return fmt::format("{:.3g}", v);
}

void draw_frame(svg::Document& doc, const Frame& f, std::string_view title, std::string_view x_title,
                std::string_view y_title, bool integer_x) {
  const double l = f.left;
  const double r = f.width - f.right;
  const double t = f.top;
  const double b = f.height - f.bottom;
  doc.line(l, b, r, b, "axis");
  doc.line(l, t, l, b, "axis");
  doc.line(l, t, r, t, "axis");
  doc.line(r, t, r, b, "axis");
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / kTicks;
    const double yv = f.y0 + (f.y1 - f.y0) * i / kTicks;
    if (!integer_x) {
      doc.text(f.px(xv), b + 16, tick_label(xv), "tick", "middle");
    }
    doc.text(l - 6, f.py(yv) + 3, tick_label(yv), "tick", "end");
  }
  if (f.x0 < 0.0 && f.x1 > 0.0) doc.line(f.px(0.0), t, f.px(0.0), b, "grid");
  if (f.y0 < 0.0 && f.y1 > 0.0) doc.line(l, f.py(0.0), r, f.py(0.0), "grid");
  doc.text(f.width / 2.0, 24, title, "title", "middle");
  doc.text((l + r) / 2.0, f.height - 12, x_title, "axis-title", "middle");
  doc.raw(fmt::format("<text class=\"axis-title\" x=\"16\" y=\"{0}\" text-anchor=\"middle\" "
                      "transform=\"rotate(-90 16 {0})\">{1}</text>",
                      svg::num((t + b) / 2.0), svg::escape(y_title)));
}

std::string marker(std::optional<Leaning> leaning, double x, double y, std::string_view cls_prefix,
                   std::string_view extra_attrs = {}) {
  constexpr double s = 6.0;
  if (!leaning) {
    return fmt::format("<polygon class=\"{} unknown\" points=\"{},{} {},{} {},{} {},{}\" fill=\"#777\"{}/>",
                       cls_prefix, svg::num(x), svg::num(y - s), svg::num(x + s), svg::num(y), svg::num(x),
                       svg::num(y + s), svg::num(x - s), svg::num(y), extra_attrs);
  }
  switch (*leaning) {
    case Leaning::Left:
      return fmt::format("<circle class=\"{} left\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#1f77b4\"{}/>", cls_prefix,
                         svg::num(x), svg::num(y), svg::num(s), extra_attrs);
    case Leaning::Central:
      return fmt::format("<rect class=\"{} central\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#7f7f7f\"{}/>",
                         cls_prefix, svg::num(x - s), svg::num(y - s), svg::num(2 * s), svg::num(2 * s), extra_attrs);
    case Leaning::Right:
      return fmt::format("<polygon class=\"{} right\" points=\"{},{} {},{} {},{}\" fill=\"#d62728\"{}/>", cls_prefix,
                         svg::num(x), svg::num(y - s), svg::num(x + s), svg::num(y + s), svg::num(x - s),
                         svg::num(y + s), extra_attrs);
  }
  return {};
}

}  // namespace

// ---------------------------------------------------------------------------

std::string TopKScope::label() const {
  if (outlet) return fmt::format("{} {} {}", *outlet, topic_key(topic), year);
  return fmt::format("{} {}", topic_key(topic), year);
}

TopKTable top_k(std::span<const Headline> bucket, const TopKScope& scope, std::size_t k, CountingMode mode) {
  if (k == 0) throw std::invalid_argument("top_k: k must be >= 1");
  std::vector<Headline> scoped;
  for (const auto& h : bucket) {
    if (h.year != scope.year) continue;
    if (scope.outlet && h.outlet != *scope.outlet) continue;
    scoped.push_back(h);
  }
  const NGramCounts counts = count_ngrams(scoped, mode);
  std::vector<std::pair<NGram, std::uint64_t>> rows(counts.begin(), counts.end());
  // `counts` is ordered by n-gram, so a stable sort on count keeps ties lexicographic.
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (rows.size() > k) rows.resize(k);
  return {scope, std::move(rows)};
}

// ---------------------------------------------------------------------------

std::string render_scatter(const CaEmbedding& emb, std::span<const OutletInfo> outlets, const PlotOptions& options) {
  const auto& pts = emb.outlet_points;
  if (pts.size() == 0) throw std::invalid_argument("render_scatter: embedding has no points");

  Frame f;
  f.width = options.width;
  f.height = options.height;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& p : pts.points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  std::tie(f.x0, f.x1) = with_margin(xmin, xmax);
  std::tie(f.y0, f.y1) = with_margin(ymin, ymax);

  auto fraction = [&](std::size_t d) {
    if (d >= emb.singular_values.size() || emb.total_inertia <= 0.0) return 0.0;
    return 100.0 * emb.singular_values[d] * emb.singular_values[d] / emb.total_inertia;
  };
  svg::Document doc(f.width, f.height);
  const std::string title =
      options.title.empty() ? fmt::format("{} {}", topic_title(emb.unit.topic), emb.unit.year) : options.title;
  draw_frame(doc, f, title, fmt::format("Dimension 1 ({:.1f}%)", fraction(0)),
             fmt::format("Dimension 2 ({:.1f}%)", fraction(1)), false);

  auto leaning_of = [&](const std::string& name) -> std::optional<Leaning> {
    for (const auto& o : outlets) {
      if (o.name == name) return o.leaning;
    }
    return std::nullopt;
  };

  std::array<bool, 4> present{};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto leaning = leaning_of(pts.outlets[i]);
    present[leaning ? static_cast<std::size_t>(*leaning) : 3] = true;
    const double x = f.px(pts.points[i].x);
    const double y = f.py(pts.points[i].y);
    doc.raw(marker(leaning, x, y, "marker", fmt::format(" data-outlet=\"{}\"", svg::escape(pts.outlets[i]))));
    doc.text(x + 8, y - 8, pts.outlets[i], "label");
  }

  // Legend, top-right inside the plot area.
  double ly = f.top + 16;
  const double lx = f.width - f.right - 90;
  const std::array<std::pair<std::optional<Leaning>, std::string_view>, 4> entries = {
      {{Leaning::Left, "Left"}, {Leaning::Central, "Central"}, {Leaning::Right, "Right"}, {std::nullopt, "Other"}}};
  for (std::size_t e = 0; e < entries.size(); ++e) {
    if (!present[e]) continue;
    doc.raw(marker(entries[e].first, lx, ly, "legend-marker"));
    doc.text(lx + 12, ly + 4, entries[e].second, "legend");
    ly += 18;
  }
  return doc.finish();
}

std::string render_series(std::span<const DiscrepancySeries> series, const PlotOptions& options) {
  std::size_t present = 0;
  int first_year = std::numeric_limits<int>::max();
  int last_year = std::numeric_limits<int>::min();
  double ymax = 0.0;
  for (const auto& s : series) {
    present += s.present();
    for (const auto& [year, value] : s.values) {
      first_year = std::min(first_year, year);
      last_year = std::max(last_year, year);
      if (value) ymax = std::max(ymax, *value);
    }
  }
  if (present == 0) throw std::invalid_argument("render_series: every value is a gap; nothing to plot");

  Frame f;
  f.width = options.width;
  f.height = options.height;
  f.right = 170.0;  // room for the legend
  f.x0 = first_year - 0.5;
  f.x1 = last_year + 0.5;
  f.y0 = 0.0;
  f.y1 = ymax > 0.0 ? ymax * 1.1 : 1.0;

  svg::Document doc(f.width, f.height);
  std::string title = options.title;
  if (title.empty()) {
    title = series.size() == 1 ? series.front().label() : std::string(to_string(series.front().kind));
  }
  const std::string y_title = series.front().kind == SeriesKind::ClusterMad ? "Median absolute deviation"
                                                                             : "Distance to major-cluster centroid";
  draw_frame(doc, f, title, "Year", y_title, true);
  for (int year = first_year; year <= last_year; ++year) {
    doc.text(f.px(year), f.height - f.bottom + 16, std::to_string(year), "tick", "middle");
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const std::string_view color = kPalette[si % kPalette.size()];
    std::vector<std::pair<double, double>> run;
    auto flush = [&] {
      if (run.size() >= 2) {
        std::string points;
        for (const auto& [x, y] : run) points += fmt::format("{}{},{}", points.empty() ? "" : " ", svg::num(x), svg::num(y));
        doc.raw(fmt::format("<polyline class=\"series-line\" data-series=\"{}\" points=\"{}\" fill=\"none\" "
                            "stroke=\"{}\" stroke-width=\"2\"/>",
                            si, points, color));
      }
      run.clear();
    };
    for (const auto& [year, value] : s.values) {
      if (!value) {
        flush();
        continue;
      }
      run.emplace_back(f.px(year), f.py(*value));
    }
    flush();
    for (const auto& [year, value] : s.values) {
      if (!value) continue;
      doc.raw(fmt::format("<circle class=\"marker\" data-series=\"{}\" data-year=\"{}\" cx=\"{}\" cy=\"{}\" r=\"4\" "
                          "fill=\"{}\"/>",
                          si, year, svg::num(f.px(year)), svg::num(f.py(*value)), color));
    }
  }

  double ly = f.top + 12;
  const double lx = f.width - f.right + 12;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const std::string_view color = kPalette[si % kPalette.size()];
    doc.raw(fmt::format("<g class=\"legend-entry\"><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" "
                        "stroke-width=\"2\"/><text class=\"legend\" x=\"{}\" y=\"{}\">{}</text></g>",
                        svg::num(lx), svg::num(ly), svg::num(lx + 18), svg::num(ly), color, svg::num(lx + 24),
                        svg::num(ly + 4), svg::escape(series[si].label())));
    ly += 18;
  }
  return doc.finish();
}

// ---------------------------------------------------------------------------

Annotations load_annotations(std::istream& in) {
  Annotations out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw ConfigError(fmt::format("annotations line {}: expected ngram<TAB>category<TAB>color", line_no));
    }
    out[line.substr(0, t1)] = {line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)};
  }
  return out;
}

std::string render_markdown(std::span<const TopKTable> tables, const Annotations* annotations) {
  if (tables.empty()) return {};
  auto cell = [&](const std::string& text) {
    std::string escaped;
    for (char c : text) {
      if (c == '|') escaped += "\\|";
      else escaped.push_back(c);
    }
    if (annotations) {
      if (auto it = annotations->find(text); it != annotations->end()) {
        return fmt::format("<span style=\"color:{}\" title=\"{}\">{}</span>", it->second.color, it->second.category,
                           escaped);
      }
    }
    return escaped;
  };

  std::string out = "|";
  std::string rule = "|";
  std::size_t depth = 0;
  for (const auto& t : tables) {
    out += " " + cell(t.scope.label()) + " |";
    rule += " --- |";
    depth = std::max(depth, t.rows.size());
  }
  out += "\n" + rule + "\n";
  for (std::size_t r = 0; r < depth; ++r) {
    out += "|";
    for (const auto& t : tables) {
      out += " " + (r < t.rows.size() ? cell(t.rows[r].first.str()) : std::string()) + " |";
    }
    out += "\n";
  }
  return out;
}

}  // namespace mediadisc
