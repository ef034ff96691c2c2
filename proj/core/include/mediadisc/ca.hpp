#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mediadisc/corpus.hpp"
#include "mediadisc/matrix.hpp"
#include "mediadisc/svd.hpp"
#include "mediadisc/tabulate.hpp"

namespace mediadisc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

double distance(Point2 a, Point2 b);

// Named points in the plane; outlets[i] sits at points[i].
struct OutletPoints {
  std::vector<std::string> outlets;
  std::vector<Point2> points;

  std::size_t size() const { return points.size(); }
  std::optional<std::size_t> index_of(std::string_view outlet) const;
};

// Correspondence analysis of one unit's table.
struct CaEmbedding {
  UnitId unit;
  // First two principal coordinates of every column (outlet).
  OutletPoints outlet_points;
  // Non-increasing, min(rows, cols) of them; trailing ones are exactly zero.
  std::vector<double> singular_values;
  double total_inertia = 0.0;
  // (sigma1^2 + sigma2^2) / total_inertia, or 1 when total_inertia is 0.
  double explained_2d = 1.0;

  std::vector<double> row_masses;
  std::vector<double> column_masses;
  // Full-dimensional column principal coordinates, columns x dims.
  Matrix column_coordinates;
  Matrix left_vectors;  // U of the standardized residual matrix

  // Row (n-gram) principal coordinates D_r^{-1/2} U Sigma, for diagnostics.
  Matrix row_coordinates() const;
};

struct CaOptions {
  SvdOptions svd;
  // Standardized-residual singular values are at most 1; values below this
  // absolute floor are round-off and are set to zero.
  double absolute_zero = 1e-13;
};

// Standardized residuals S = D_r^{-1/2} (P - r c^T) D_c^{-1/2} of the
// correspondence matrix P = N / n.
Matrix standardized_residuals(const ContingencyTable& table);

// Throws DataError naming the unit when the table is not analyzable.
CaEmbedding ca_embed(const ContingencyTable& table, const CaOptions& options = {});

// Pearson chi-square straight from the counts.
double chi_square_stat(const ContingencyTable& table);

// ---------------------------------------------------------------------------
// Dumps

struct EmbeddingRow {
  std::string outlet;
  Point2 point;
  std::string leaning;
};

// `outlet,dim1,dim2,leaning`; coordinates are written with 17 significant
// digits so they read back bit-exact. Outlets missing from `outlets` get an
// empty leaning.
void write_embedding_csv(std::ostream& out, const CaEmbedding& emb, std::span<const OutletInfo> outlets);
std::vector<EmbeddingRow> read_embedding_csv(std::istream& in);

// `dim,singular_value,inertia_fraction`.
void write_scree_csv(std::ostream& out, const CaEmbedding& emb);
std::vector<double> read_scree_csv(std::istream& in);

// Shortest round-trip-safe decimal form used by every numeric dump.
std::string format_real(double value);

}  // namespace mediadisc
