#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mediadisc/error.hpp"
#include "mediadisc/svd.hpp"

using namespace mediadisc;

namespace {

double max_abs(const Matrix& m) {
  double out = 0.0;
  for (double v : m.data()) out = std::max(out, std::fabs(v));
  return out;
}

double orthonormality_residual(const Matrix& q) {
  return max_abs(q.transposed() * q - Matrix::identity(q.cols()));
}

// The checks every decomposition must pass, whatever its shape.
void expect_valid(const Matrix& a, const SvdResult& r) {
  const std::size_t k = std::min(a.rows(), a.cols());
  ASSERT_EQ(r.singular_values.size(), k);
  ASSERT_EQ(r.u.rows(), a.rows());
  ASSERT_EQ(r.u.cols(), k);
  ASSERT_EQ(r.v.rows(), a.cols());
  ASSERT_EQ(r.v.cols(), k);
  EXPECT_LE((a - r.reconstruct()).frobenius_norm(), 1e-10 * std::max(1.0, a.frobenius_norm()));
  EXPECT_LE(orthonormality_residual(r.u), 1e-10);
  EXPECT_LE(orthonormality_residual(r.v), 1e-10);
  for (std::size_t i = 0; i < k; ++i) {
    EXPECT_GE(r.singular_values[i], 0.0);
    if (i > 0) {
      EXPECT_LE(r.singular_values[i], r.singular_values[i - 1]);
    }
  }
  // Canonical sign: the largest-magnitude entry of each V column is positive.
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.v.rows(); ++i) {
      if (std::fabs(r.v(i, c)) > std::fabs(r.v(best, c))) best = i;
    }
    EXPECT_GT(r.v(best, c), 0.0) << "column " << c;
  }
}

}  // namespace

TEST(Svd, Identity) {
  const auto r = svd(Matrix::identity(3));
  expect_valid(Matrix::identity(3), r);
  for (double s : r.singular_values) EXPECT_NEAR(s, 1.0, 1e-15);
}

TEST(Svd, Diagonal) {
  const Matrix a{{3, 0}, {0, 1}};
  const auto r = svd(a);
  expect_valid(a, r);
  EXPECT_NEAR(r.singular_values[0], 3.0, 1e-15);
  EXPECT_NEAR(r.singular_values[1], 1.0, 1e-15);
  const Matrix swapped{{1, 0}, {0, 3}};
  const auto s = svd(swapped);
  EXPECT_NEAR(s.singular_values[0], 3.0, 1e-15);
  EXPECT_NEAR(s.v(1, 0), 1.0, 1e-15);
}

TEST(Svd, RandomTallAgainstGramOracle) {
  FixtureRng rng(42);
  const Matrix a = fixture::random_matrix(rng, 50, 5);
  const auto r = svd(a);
  expect_valid(a, r);
  const auto eig = oracle::gram_eigenvalues(a);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(r.singular_values[i] * r.singular_values[i], static_cast<double>(eig[i]), 1e-8) << i;
  }
}

TEST(Svd, ManyShapes) {
  FixtureRng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = 1 + rng.below(40);
    const std::size_t cols = 1 + rng.below(9);
    const Matrix a = fixture::random_matrix(rng, rows, cols);
    SCOPED_TRACE(std::to_string(rows) + "x" + std::to_string(cols));
    expect_valid(a, svd(a));
  }
}

TEST(Svd, WideInputIsTransposedInternally) {
  FixtureRng rng(3);
  const Matrix a = fixture::random_matrix(rng, 4, 11);
  const auto r = svd(a);
  expect_valid(a, r);
  const auto t = svd(a.transposed());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.singular_values[i], t.singular_values[i], 1e-12);
}

TEST(Svd, RankDeficient) {
  // Third column is the sum of the first two; fourth is zero.
  FixtureRng rng(5);
  Matrix a(20, 4);
  for (std::size_t i = 0; i < 20; ++i) {
    a(i, 0) = rng.uniform();
    a(i, 1) = rng.uniform() - 0.5;
    a(i, 2) = a(i, 0) + a(i, 1);
  }
  const auto r = svd(a);
  expect_valid(a, r);
  EXPECT_GT(r.singular_values[1], 0.1);
  EXPECT_EQ(r.singular_values[2], 0.0);
  EXPECT_EQ(r.singular_values[3], 0.0);
}

TEST(Svd, ZeroMatrix) {
  const Matrix a(6, 3);
  const auto r = svd(a);
  expect_valid(a, r);
  for (double s : r.singular_values) EXPECT_EQ(s, 0.0);
}

TEST(Svd, NonFiniteInputIsNumericError) {
  Matrix a = Matrix::identity(3);
  a(1, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(svd(a), NumericError);
  a(1, 2) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(svd(a), NumericError);
}

TEST(Svd, SweepBudgetExhaustedIsNumericError) {
  FixtureRng rng(1);
  const Matrix a = fixture::random_matrix(rng, 30, 8);
  SvdOptions options;
  options.max_sweeps = 1;
  EXPECT_THROW(svd(a, options), NumericError);
}

TEST(Svd, SignIsIndependentOfInputSign) {
  FixtureRng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = fixture::random_matrix(rng, 25, 6);
    Matrix neg = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) neg(i, j) = -a(i, j);
    }
    const auto r = svd(a);
    const auto n = svd(neg);
    EXPECT_LE(max_abs(r.v - n.v), 1e-10);
    EXPECT_EQ(svd(a).v, r.v);
  }
}
