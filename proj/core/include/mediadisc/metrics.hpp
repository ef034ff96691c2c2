#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mediadisc/ca.hpp"
#include "mediadisc/lexicon.hpp"
#include "mediadisc/matrix.hpp"

namespace mediadisc {

// Symmetric Euclidean distance matrix with a zero diagonal.
Matrix pairwise_distances(const OutletPoints& pts);

// Median of the upper-triangle distances; the Auto clustering threshold.
double median_pairwise_distance(const OutletPoints& pts);

struct ClusterAssignment {
  UnitId unit;
  // Partition of point indices. Members ascend; clusters are ordered by
  // their smallest member.
  std::vector<std::vector<std::size_t>> clusters;
  std::size_t major = 0;
  double threshold = 0.0;  // the cut actually used

  const std::vector<std::size_t>& major_members() const { return clusters.at(major); }
  bool in_major(std::size_t point) const;
};

// Single-linkage agglomeration cut at `threshold`: clusters merge while
// their closest members are within the threshold (distance <= threshold).
// std::nullopt selects the Auto threshold. Equal-distance merges go to the
// lowest-index cluster pair first. The major cluster is the largest; ties go
// to the cluster holding the lexicographically smallest outlet name.
ClusterAssignment find_clusters(const OutletPoints& pts, std::optional<double> threshold = std::nullopt);

// Distance from the outlet to the mean point of the major cluster with the
// outlet itself left out. std::nullopt when the outlet is not embedded or
// the major cluster has no other member.
std::optional<double> centroid_distance(const OutletPoints& pts, std::string_view outlet,
                                        const ClusterAssignment& clusters);

enum class MadVariant {
  AllOutlets,    // every embedded outlet
  MajorCluster,  // members of the major cluster only
};

std::string_view to_string(MadVariant variant);
std::optional<MadVariant> parse_mad_variant(std::string_view text);

double median(std::vector<double> values);
Point2 componentwise_median(std::span<const Point2> points);

// Median Euclidean distance of the points to their component-wise median
// point. Even counts average the two middle values.
double cluster_mad(const OutletPoints& pts, const ClusterAssignment& clusters,
                   MadVariant variant = MadVariant::AllOutlets);

// ---------------------------------------------------------------------------

enum class SeriesKind { CentroidDistance, ClusterMad };

std::string_view to_string(SeriesKind kind);
std::optional<SeriesKind> parse_series_kind(std::string_view text);

struct DiscrepancySeries {
  Topic topic = Topic::ForeignAffairs;
  SeriesKind kind = SeriesKind::ClusterMad;
  std::string outlet;  // CentroidDistance only
  // One entry per requested year; std::nullopt marks a gap.
  std::map<int, std::optional<double>> values;

  std::size_t present() const;
  std::string label() const;
};

struct SeriesOptions {
  std::optional<double> cluster_threshold;  // std::nullopt = Auto
  MadVariant mad_variant = MadVariant::AllOutlets;
};

// Evaluates one metric for every year in `years`. Years absent from
// `embeddings` (degenerate or missing units) become gaps.
DiscrepancySeries build_series(Topic topic, std::span<const int> years, const std::map<int, CaEmbedding>& embeddings,
                               SeriesKind kind, std::string_view outlet = {}, const SeriesOptions& options = {});

// `topic,kind,outlet_or_blank,year,value_or_NA`, with a header row.
void write_series_csv(std::ostream& out, std::span<const DiscrepancySeries> series);
std::vector<DiscrepancySeries> read_series_csv(std::istream& in);

}  // namespace mediadisc
