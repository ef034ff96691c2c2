#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mediadisc/ca.hpp"
#include "mediadisc/error.hpp"

using namespace mediadisc;

namespace {

double full_distance(const Matrix& g, std::size_t a, std::size_t b) {
  double d2 = 0.0;
  for (std::size_t d = 0; d < g.cols(); ++d) d2 += (g(a, d) - g(b, d)) * (g(a, d) - g(b, d));
  return std::sqrt(d2);
}

oracle::CountMatrix permute_columns(const oracle::CountMatrix& n, const std::vector<std::size_t>& perm) {
  oracle::CountMatrix out(n.size(), std::vector<std::uint64_t>(perm.size()));
  for (std::size_t i = 0; i < n.size(); ++i) {
    for (std::size_t j = 0; j < perm.size(); ++j) out[i][j] = n[i][perm[j]];
  }
  return out;
}

}  // namespace

TEST(Ca, IdenticalProfilesHaveZeroInertia) {
  const auto t = fixture::to_table({{2, 4, 6}, {1, 2, 3}, {5, 10, 15}});
  const auto emb = ca_embed(t);
  EXPECT_NEAR(emb.total_inertia, 0.0, 1e-12);
  for (const auto& p : emb.outlet_points.points) {
    EXPECT_NEAR(p.x, 0.0, 1e-12);
    EXPECT_NEAR(p.y, 0.0, 1e-12);
  }
  EXPECT_NEAR(chi_square_stat(t), 0.0, 1e-12);
  EXPECT_EQ(emb.explained_2d, 1.0);
}

TEST(Ca, DiagonalTableIsEquilateral) {
  const oracle::CountMatrix n = {{10, 0, 0}, {0, 10, 0}, {0, 0, 10}};
  const auto emb = ca_embed(fixture::to_table(n));
  const auto& p = emb.outlet_points.points;
  const double d01 = distance(p[0], p[1]);
  const double d02 = distance(p[0], p[2]);
  const double d12 = distance(p[1], p[2]);
  EXPECT_NEAR(d01, d02, 1e-9);
  EXPECT_NEAR(d01, d12, 1e-9);
  const double oracle_d = static_cast<double>(oracle::chi_square_distance(n, 0, 1));
  EXPECT_NEAR(oracle::chi_square_distance(n, 0, 2), oracle_d, 1e-12);
  EXPECT_NEAR(d01, oracle_d, 1e-9);
  EXPECT_NEAR(emb.total_inertia, 2.0, 1e-12);
}

TEST(Ca, ThreeOrFewerColumnsExplainEverythingIn2d) {
  FixtureRng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = fixture::random_counts(rng, 2 + rng.below(30), 3, 40);
    EXPECT_NEAR(ca_embed(fixture::to_table(n)).explained_2d, 1.0, 1e-12);
  }
}

TEST(Ca, RankOneTablePadsSecondCoordinate) {
  const auto emb = ca_embed(fixture::to_table({{10, 2, 5}, {1, 9, 5}}));
  EXPECT_GT(emb.singular_values[0], 0.0);
  EXPECT_EQ(emb.singular_values[1], 0.0);
  for (const auto& p : emb.outlet_points.points) EXPECT_EQ(p.y, 0.0);
}

TEST(Ca, ChiSquareHandExample) {
  // Two columns is below the analyzable shape, so check through the oracle
  // and through a padded three-column variant that adds nothing.
  EXPECT_NEAR(static_cast<double>(oracle::chi_square({{10, 0}, {0, 10}})), 20.0, 1e-12);
  const auto t = fixture::to_table({{10, 0, 0}, {0, 10, 0}, {0, 0, 10}});
  EXPECT_NEAR(chi_square_stat(t), 60.0, 1e-12);
}

TEST(Ca, InertiaEqualsChiSquareOverN) {
  FixtureRng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = fixture::random_counts(rng, 2 + rng.below(60), 3 + rng.below(7), 1 + rng.below(200));
    const auto t = fixture::to_table(n);
    const auto emb = ca_embed(t);
    const double chi2 = chi_square_stat(t);
    EXPECT_NEAR(emb.total_inertia * static_cast<double>(t.grand_total()), chi2, 1e-10 * std::max(1.0, chi2));
    EXPECT_NEAR(chi2, static_cast<double>(oracle::chi_square(n)), 1e-10 * std::max(1.0, chi2));
    double sum = 0.0;
    for (double s : emb.singular_values) sum += s * s;
    EXPECT_DOUBLE_EQ(sum, emb.total_inertia);
    // At most min(rows, cols) - 1 non-zero singular values.
    const auto nonzero = std::count_if(emb.singular_values.begin(), emb.singular_values.end(),
                                       [](double s) { return s > 0.0; });
    EXPECT_LE(static_cast<std::size_t>(nonzero), std::min(t.row_count(), t.column_count()) - 1);
    EXPECT_GE(emb.explained_2d, 0.0);
    EXPECT_LE(emb.explained_2d, 1.0);
  }
}

TEST(Ca, FullCoordinatesPreserveChiSquareDistances) {
  FixtureRng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = fixture::random_counts(rng, 2 + rng.below(40), 3 + rng.below(7), 50);
    const auto emb = ca_embed(fixture::to_table(n));
    for (std::size_t a = 0; a < n[0].size(); ++a) {
      for (std::size_t b = a + 1; b < n[0].size(); ++b) {
        EXPECT_NEAR(full_distance(emb.column_coordinates, a, b),
                    static_cast<double>(oracle::chi_square_distance(n, a, b)), 1e-9);
      }
    }
  }
}

TEST(Ca, CoordinatesAreMassCentered) {
  FixtureRng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto emb = ca_embed(fixture::to_table(fixture::random_counts(rng, 5 + rng.below(40), 9, 80)));
    for (std::size_t d = 0; d < emb.column_coordinates.cols(); ++d) {
      double s = 0.0;
      for (std::size_t j = 0; j < emb.column_coordinates.rows(); ++j) s += emb.column_masses[j] * emb.column_coordinates(j, d);
      EXPECT_NEAR(s, 0.0, 1e-10);
    }
  }
}

TEST(Ca, ColumnPermutationPermutesPoints) {
  FixtureRng rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t cols = 3 + rng.below(7);
    const auto n = fixture::random_counts(rng, 10 + rng.below(30), cols, 100);
    std::vector<std::size_t> perm(cols);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = cols - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const auto base = ca_embed(fixture::to_table(n));
    const auto moved = ca_embed(fixture::to_table(permute_columns(n, perm)));
    for (std::size_t j = 0; j < cols; ++j) {
      EXPECT_NEAR(moved.outlet_points.points[j].x, base.outlet_points.points[perm[j]].x, 1e-12);
      EXPECT_NEAR(moved.outlet_points.points[j].y, base.outlet_points.points[perm[j]].y, 1e-12);
    }
  }
}

TEST(Ca, DoublingCountsLeavesPointsUnchanged) {
  FixtureRng rng(45);
  for (int trial = 0; trial < 20; ++trial) {
    auto n = fixture::random_counts(rng, 5 + rng.below(50), 3 + rng.below(7), 100);
    const auto base = ca_embed(fixture::to_table(n));
    for (auto& row : n) {
      for (auto& v : row) v *= 2;
    }
    const auto doubled = ca_embed(fixture::to_table(n));
    for (std::size_t j = 0; j < base.outlet_points.size(); ++j) {
      EXPECT_NEAR(doubled.outlet_points.points[j].x, base.outlet_points.points[j].x, 1e-12);
      EXPECT_NEAR(doubled.outlet_points.points[j].y, base.outlet_points.points[j].y, 1e-12);
    }
  }
}

TEST(Ca, DegenerateTableIsRefusedWithUnit) {
  const UnitId unit{Topic::SocialIssue, 2019};
  try {
    ca_embed(fixture::to_table({{1, 2}, {3, 4}}, unit));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("social_2019"), std::string::npos) << e.what();
  }
  EXPECT_THROW(chi_square_stat(fixture::to_table({{1, 2, 3}}, unit)), DataError);
}

TEST(Ca, RowCoordinatesSatisfyTransitionFormula) {
  // Row principal coordinates are the profile-weighted average of column
  // standard coordinates: F_i = sum_j (N_ij / N_i.) G_j / sigma.
  FixtureRng rng(77);
  const auto n = fixture::random_counts(rng, 12, 6, 60);
  const auto emb = ca_embed(fixture::to_table(n));
  const Matrix f = emb.row_coordinates();
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double rt = std::accumulate(n[i].begin(), n[i].end(), 0.0);
    for (std::size_t d = 0; d < 2; ++d) {
      double expected = 0.0;
      for (std::size_t j = 0; j < n[i].size(); ++j) {
        expected += static_cast<double>(n[i][j]) / rt * emb.column_coordinates(j, d) / emb.singular_values[d];
      }
      EXPECT_NEAR(f(i, d), expected, 1e-9);
    }
  }
}

TEST(CaCsv, EmbeddingRoundTripIsBitExact) {
  FixtureRng rng(3);
  const auto emb = ca_embed(fixture::to_table(fixture::random_counts(rng, 20, 5, 90)));
  const std::vector<OutletInfo> outlets = {{"o1", Leaning::Left}, {"o2", Leaning::Right}, {"o3", Leaning::Central}};
  std::ostringstream out;
  write_embedding_csv(out, emb, outlets);
  std::istringstream in(out.str());
  const auto rows = read_embedding_csv(in);
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    EXPECT_EQ(rows[j].outlet, emb.outlet_points.outlets[j]);
    EXPECT_EQ(rows[j].point, emb.outlet_points.points[j]);
  }
  EXPECT_EQ(rows[0].leaning, "left");
  EXPECT_EQ(rows[1].leaning, "right");
  EXPECT_EQ(rows[4].leaning, "");
}

TEST(CaCsv, ScreeRoundTrip) {
  FixtureRng rng(4);
  const auto emb = ca_embed(fixture::to_table(fixture::random_counts(rng, 15, 7, 90)));
  std::ostringstream out;
  write_scree_csv(out, emb);
  std::istringstream in(out.str());
  EXPECT_EQ(read_scree_csv(in), emb.singular_values);
  std::istringstream bad("dim,sv\n1,0.5\n");
  EXPECT_THROW(read_scree_csv(bad), DataError);
}

TEST(CaCsv, FormatRealRoundTrips) {
  FixtureRng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(30)) - 15.0);
    EXPECT_EQ(std::stod(format_real(v)), v);
  }
  EXPECT_EQ(format_real(-0.0), "0");
}
