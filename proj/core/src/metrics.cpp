#include "mediadisc/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include <fmt/format.h>

#include "mediadisc/csv.hpp"
#include "mediadisc/error.hpp"

namespace mediadisc {

Matrix pairwise_distances(const OutletPoints& pts) {
  const std::size_t n = pts.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = distance(pts.points[i], pts.points[j]);
    }
  }
  return d;
}

double median_pairwise_distance(const OutletPoints& pts) {
  std::vector<double> values;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) values.push_back(distance(pts.points[i], pts.points[j]));
  }
  return values.empty() ? 0.0 : median(std::move(values));
}

bool ClusterAssignment::in_major(std::size_t point) const {
  const auto& m = major_members();
  return std::binary_search(m.begin(), m.end(), point);
}

ClusterAssignment find_clusters(const OutletPoints& pts, std::optional<double> threshold) {
  const std::size_t n = pts.size();
  const Matrix d = pairwise_distances(pts);
  ClusterAssignment out;
  out.threshold = threshold.value_or(median_pairwise_distance(pts));

  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});

  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_a = 0;
    std::size_t best_b = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double link = std::numeric_limits<double>::infinity();
        for (std::size_t i : clusters[a]) {
          for (std::size_t j : clusters[b]) link = std::min(link, d(i, j));
        }
        if (link < best) {
          best = link;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (clusters.size() < 2 || best > out.threshold) break;
    auto& target = clusters[best_a];
    target.insert(target.end(), clusters[best_b].begin(), clusters[best_b].end());
    std::sort(target.begin(), target.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
  }
  std::sort(clusters.begin(), clusters.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });

  auto smallest_name = [&](const std::vector<std::size_t>& members) {
    const std::string* best = &pts.outlets[members.front()];
    for (std::size_t i : members) {
      if (pts.outlets[i] < *best) best = &pts.outlets[i];
    }
    return *best;
  };
  std::size_t major = 0;
  for (std::size_t c = 1; c < clusters.size(); ++c) {
    if (clusters[c].size() > clusters[major].size() ||
        (clusters[c].size() == clusters[major].size() && smallest_name(clusters[c]) < smallest_name(clusters[major]))) {
      major = c;
    }
  }
  out.clusters = std::move(clusters);
  out.major = major;
  return out;
}

std::optional<double> centroid_distance(const OutletPoints& pts, std::string_view outlet,
                                        const ClusterAssignment& clusters) {
  const auto idx = pts.index_of(outlet);
  if (!idx || clusters.clusters.empty()) return std::nullopt;
  Point2 sum;
  std::size_t count = 0;
  for (std::size_t i : clusters.major_members()) {
    if (i == *idx) continue;
    sum.x += pts.points[i].x;
    sum.y += pts.points[i].y;
    ++count;
  }
  if (count == 0) return std::nullopt;
  const Point2 centroid{sum.x / static_cast<double>(count), sum.y / static_cast<double>(count)};
  return distance(pts.points[*idx], centroid);
}

std::string_view to_string(MadVariant variant) {
  return variant == MadVariant::AllOutlets ? "all" : "major";
}

std::optional<MadVariant> parse_mad_variant(std::string_view text) {
  if (text == "all") return MadVariant::AllOutlets;
  if (text == "major") return MadVariant::MajorCluster;
  return std::nullopt;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

Point2 componentwise_median(std::span<const Point2> points) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  return {median(std::move(xs)), median(std::move(ys))};
}

double cluster_mad(const OutletPoints& pts, const ClusterAssignment& clusters, MadVariant variant) {
  std::vector<Point2> chosen;
  if (variant == MadVariant::AllOutlets) {
    chosen = pts.points;
  } else {
    for (std::size_t i : clusters.major_members()) chosen.push_back(pts.points[i]);
  }
  if (chosen.empty()) return 0.0;
  const Point2 center = componentwise_median(chosen);
  std::vector<double> dist;
  dist.reserve(chosen.size());
  for (const auto& p : chosen) dist.push_back(distance(p, center));
  return median(std::move(dist));
}

// ---------------------------------------------------------------------------

std::string_view to_string(SeriesKind kind) {
  return kind == SeriesKind::CentroidDistance ? "centroid_distance" : "cluster_mad";
}

std::optional<SeriesKind> parse_series_kind(std::string_view text) {
  if (text == "centroid_distance") return SeriesKind::CentroidDistance;
  if (text == "cluster_mad") return SeriesKind::ClusterMad;
  return std::nullopt;
}

std::size_t DiscrepancySeries::present() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](const auto& kv) { return kv.second.has_value(); }));
}

std::string DiscrepancySeries::label() const {
  if (kind == SeriesKind::CentroidDistance) return fmt::format("{} {} to major cluster", topic_key(topic), outlet);
  return std::string(topic_title(topic));
}

DiscrepancySeries build_series(Topic topic, std::span<const int> years, const std::map<int, CaEmbedding>& embeddings,
                               SeriesKind kind, std::string_view outlet, const SeriesOptions& options) {
  DiscrepancySeries series;
  series.topic = topic;
  series.kind = kind;
  series.outlet = kind == SeriesKind::CentroidDistance ? std::string(outlet) : std::string();
  for (int year : years) {
    auto it = embeddings.find(year);
    if (it == embeddings.end() || it->second.outlet_points.size() < 2) {
      series.values[year] = std::nullopt;
      continue;
    }
    const auto& pts = it->second.outlet_points;
    auto clusters = find_clusters(pts, options.cluster_threshold);
    clusters.unit = it->second.unit;
    if (kind == SeriesKind::CentroidDistance) {
      series.values[year] = centroid_distance(pts, outlet, clusters);
    } else {
      series.values[year] = cluster_mad(pts, clusters, options.mad_variant);
    }
  }
  return series;
}

void write_series_csv(std::ostream& out, std::span<const DiscrepancySeries> series) {
  out << "topic,kind,outlet_or_blank,year,value_or_NA\n";
  for (const auto& s : series) {
    for (const auto& [year, value] : s.values) {
      out << csv::join({std::string(topic_key(s.topic)), std::string(to_string(s.kind)), s.outlet,
                        std::to_string(year), value ? format_real(*value) : "NA"})
          << '\n';
    }
  }
}

std::vector<DiscrepancySeries> read_series_csv(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->fields != std::vector<std::string>{"topic", "kind", "outlet_or_blank", "year", "value_or_NA"}) {
    throw DataError("series CSV: expected header 'topic,kind,outlet_or_blank,year,value_or_NA'");
  }
  std::vector<DiscrepancySeries> out;
  while (auto rec = reader.next()) {
    if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
    if (rec->malformed || rec->fields.size() != 5) {
      throw DataError(fmt::format("series CSV line {}: expected 5 fields", rec->line));
    }
    const auto topic = parse_topic(rec->fields[0]);
    const auto kind = parse_series_kind(rec->fields[1]);
    int year = 0;
    const auto& ytext = rec->fields[3];
    auto [yptr, yec] = std::from_chars(ytext.data(), ytext.data() + ytext.size(), year);
    if (!topic || !kind || yec != std::errc{} || yptr != ytext.data() + ytext.size()) {
      throw DataError(fmt::format("series CSV line {}: bad topic, kind, or year", rec->line));
    }
    std::optional<double> value;
    if (rec->fields[4] != "NA") {
      double v = 0.0;
      const auto& vtext = rec->fields[4];
      auto [vptr, vec] = std::from_chars(vtext.data(), vtext.data() + vtext.size(), v);
      if (vec != std::errc{} || vptr != vtext.data() + vtext.size()) {
        throw DataError(fmt::format("series CSV line {}: bad value '{}'", rec->line, vtext));
      }
      value = v;
    }
    if (out.empty() || out.back().topic != *topic || out.back().kind != *kind || out.back().outlet != rec->fields[2]) {
      out.push_back({*topic, *kind, rec->fields[2], {}});
    }
    out.back().values[year] = value;
  }
  return out;
}

}  // namespace mediadisc
