#include "mediadisc/ca.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "mediadisc/csv.hpp"
#include "mediadisc/error.hpp"

namespace mediadisc {

namespace {

void require_analyzable(const ContingencyTable& table) {
  if (!table.is_analyzable()) {
    throw DataError(fmt::format("{}: table is degenerate ({} rows x {} columns, total {}); need >= 2 x 3",
                                table.unit().str(), table.row_count(), table.column_count(),
                                table.grand_total()));
  }
}

double parse_double(const std::string& text, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DataError(fmt::format("{}: bad number '{}'", what, text));
  }
  return v;
}

}  // namespace

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::optional<std::size_t> OutletPoints::index_of(std::string_view outlet) const {
  for (std::size_t i = 0; i < outlets.size(); ++i) {
    if (outlets[i] == outlet) return i;
  }
  return std::nullopt;
}

Matrix CaEmbedding::row_coordinates() const {
  Matrix f(left_vectors.rows(), left_vectors.cols());
  for (std::size_t i = 0; i < f.rows(); ++i) {
    const double w = 1.0 / std::sqrt(row_masses[i]);
    for (std::size_t d = 0; d < f.cols(); ++d) f(i, d) = w * left_vectors(i, d) * singular_values[d];
  }
  return f;
}

Matrix standardized_residuals(const ContingencyTable& table) {
  const std::size_t rows = table.row_count();
  const std::size_t cols = table.column_count();
  const double n = static_cast<double>(table.grand_total());
  const auto row_totals = table.row_totals();
  const auto col_totals = table.column_totals();
  Matrix s(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const double r = static_cast<double>(row_totals[i]) / n;
    for (std::size_t j = 0; j < cols; ++j) {
      const double c = static_cast<double>(col_totals[j]) / n;
      const double p = static_cast<double>(table.at(i, j)) / n;
      s(i, j) = (p - r * c) / std::sqrt(r * c);
    }
  }
  return s;
}

CaEmbedding ca_embed(const ContingencyTable& table, const CaOptions& options) {
  require_analyzable(table);
  const std::size_t cols = table.column_count();
  const double n = static_cast<double>(table.grand_total());

  SvdResult dec = svd(standardized_residuals(table), options.svd);
  for (double& s : dec.singular_values) {
    if (s < options.absolute_zero) s = 0.0;
  }

  CaEmbedding emb;
  emb.unit = table.unit();
  for (auto t : table.row_totals()) emb.row_masses.push_back(static_cast<double>(t) / n);
  for (auto t : table.column_totals()) emb.column_masses.push_back(static_cast<double>(t) / n);

  const std::size_t dims = dec.singular_values.size();
  emb.column_coordinates = Matrix(cols, dims);
  for (std::size_t j = 0; j < cols; ++j) {
    const double w = 1.0 / std::sqrt(emb.column_masses[j]);
    for (std::size_t d = 0; d < dims; ++d) {
      emb.column_coordinates(j, d) = w * dec.v(j, d) * dec.singular_values[d];
    }
  }

  emb.outlet_points.outlets = table.columns();
  for (std::size_t j = 0; j < cols; ++j) {
    Point2 p;
    if (dims > 0) p.x = emb.column_coordinates(j, 0);
    if (dims > 1) p.y = emb.column_coordinates(j, 1);
    emb.outlet_points.points.push_back(p);
  }

  double inertia = 0.0;
  for (double s : dec.singular_values) inertia += s * s;
  emb.total_inertia = inertia;
  if (inertia > 0.0) {
    double top = 0.0;
    for (std::size_t d = 0; d < std::min<std::size_t>(2, dims); ++d) top += dec.singular_values[d] * dec.singular_values[d];
    emb.explained_2d = std::min(1.0, top / inertia);
  } else {
    emb.explained_2d = 1.0;
  }
  emb.singular_values = std::move(dec.singular_values);
  emb.left_vectors = std::move(dec.u);
  return emb;
}

double chi_square_stat(const ContingencyTable& table) {
  require_analyzable(table);
  const double n = static_cast<double>(table.grand_total());
  const auto row_totals = table.row_totals();
  const auto col_totals = table.column_totals();
  double chi2 = 0.0;
  for (std::size_t i = 0; i < table.row_count(); ++i) {
    for (std::size_t j = 0; j < table.column_count(); ++j) {
      const double expected = static_cast<double>(row_totals[i]) * static_cast<double>(col_totals[j]) / n;
      const double diff = static_cast<double>(table.at(i, j)) - expected;
      chi2 += diff * diff / expected;
    }
  }
  return chi2;
}

// ---------------------------------------------------------------------------

std::string format_real(double value) {
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{}", value);
}

void write_embedding_csv(std::ostream& out, const CaEmbedding& emb, std::span<const OutletInfo> outlets) {
  out << "outlet,dim1,dim2,leaning\n";
  const auto& pts = emb.outlet_points;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    std::string leaning;
    for (const auto& o : outlets) {
      if (o.name == pts.outlets[j]) leaning = std::string(to_string(o.leaning));
    }
    out << csv::join({pts.outlets[j], format_real(pts.points[j].x), format_real(pts.points[j].y), leaning}) << '\n';
  }
}

std::vector<EmbeddingRow> read_embedding_csv(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->fields != std::vector<std::string>{"outlet", "dim1", "dim2", "leaning"}) {
    throw DataError("embedding CSV: expected header 'outlet,dim1,dim2,leaning'");
  }
  std::vector<EmbeddingRow> rows;
  while (auto rec = reader.next()) {
    if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
    if (rec->malformed || rec->fields.size() != 4) {
      throw DataError(fmt::format("embedding CSV line {}: expected 4 fields", rec->line));
    }
    rows.push_back({rec->fields[0],
                    {parse_double(rec->fields[1], "embedding CSV"), parse_double(rec->fields[2], "embedding CSV")},
                    rec->fields[3]});
  }
  return rows;
}

void write_scree_csv(std::ostream& out, const CaEmbedding& emb) {
  out << "dim,singular_value,inertia_fraction\n";
  for (std::size_t d = 0; d < emb.singular_values.size(); ++d) {
    const double s = emb.singular_values[d];
    const double fraction = emb.total_inertia > 0.0 ? s * s / emb.total_inertia : 0.0;
    out << (d + 1) << ',' << format_real(s) << ',' << format_real(fraction) << '\n';
  }
}

std::vector<double> read_scree_csv(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->fields != std::vector<std::string>{"dim", "singular_value", "inertia_fraction"}) {
    throw DataError("scree CSV: expected header 'dim,singular_value,inertia_fraction'");
  }
  std::vector<double> sigma;
  while (auto rec = reader.next()) {
    if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
    if (rec->malformed || rec->fields.size() != 3) {
      throw DataError(fmt::format("scree CSV line {}: expected 3 fields", rec->line));
    }
    sigma.push_back(parse_double(rec->fields[1], "scree CSV"));
  }
  return sigma;
}

}  // namespace mediadisc
