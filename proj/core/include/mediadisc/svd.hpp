#pragma once

#include <cstddef>
#include <vector>

#include "mediadisc/matrix.hpp"

namespace mediadisc {

// Thin SVD A = U diag(sigma) V^T of an m x k matrix, r = min(m, k):
// U is m x r and V is k x r, both with orthonormal columns; singular values
// are non-increasing. Sign convention: in each column of V the entry of
// largest magnitude is positive (first such index on ties), so results are
// deterministic and diff-able.
struct SvdResult {
  Matrix u;
  std::vector<double> singular_values;
  Matrix v;

  // U diag(sigma) V^T.
  Matrix reconstruct() const;
};

struct SvdOptions {
  std::size_t max_sweeps = 100;
  // A column pair is rotated while |<a_p, a_q>| > tolerance * |a_p| |a_q|.
  // The effective tolerance is never below m * machine epsilon.
  double tolerance = 1e-15;
  // Singular values below zero_threshold * sigma_max are set to exactly zero.
  double zero_threshold = 1e-12;
};

// One-sided (Hestenes) cyclic Jacobi. Wide inputs are transposed
// internally. Left vectors for zero singular values are completed to an
// orthonormal set. Throws NumericError on non-finite input or when the
// sweep budget is exhausted.
SvdResult svd(const Matrix& a, const SvdOptions& options = {});

}  // namespace mediadisc
