#include "mediadisc/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "mediadisc/error.hpp"

namespace mediadisc {

namespace {

using Column = std::vector<double>;

double dot(const Column& a, const Column& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Column& a) {
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : a) {
    if (v == 0.0) continue;
    const double x = std::fabs(v);
    if (scale < x) {
      ssq = 1.0 + ssq * (scale / x) * (scale / x);
      scale = x;
    } else {
      ssq += (x / scale) * (x / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

void rotate(Column& p, Column& q, double c, double s) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double xp = p[i];
    const double xq = q[i];
    p[i] = c * xp - s * xq;
    q[i] = s * xp + c * xq;
  }
}

// Extends `basis` (orthonormal columns of length m) with one more unit
// vector orthogonal to all of them: the projection of the first standard
// basis vector whose residual norm reaches sqrt((m - r) / m). The squared
// residual norms of all m candidates sum to m - r, so one always qualifies.
Column complete_basis(const std::vector<Column>& basis, std::size_t m) {
  const double bound = std::sqrt(static_cast<double>(m - basis.size()) / static_cast<double>(m));
  Column best;
  double best_norm = -1.0;
  for (std::size_t e = 0; e < m; ++e) {
    Column v(m, 0.0);
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double proj = dot(v, b);
        for (std::size_t i = 0; i < m; ++i) v[i] -= proj * b[i];
      }
    }
    const double n = norm(v);
    if (n > best_norm) {
      best_norm = n;
      best = std::move(v);
    }
    // Slack for round-off in the projections.
    if (best_norm >= bound * (1.0 - 1e-9)) break;
  }
  for (double& x : best) x /= best_norm;
  return best;
}

struct RawSvd {
  std::vector<Column> u;  // r columns of length m
  std::vector<double> sigma;
  std::vector<Column> v;  // r columns of length k
};

// Requires k <= m.
RawSvd jacobi_tall(const Matrix& a, const SvdOptions& options) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  std::vector<Column> w(k, Column(m));
  std::vector<Column> v(k, Column(k, 0.0));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < m; ++i) w[j][i] = a(i, j);
    v[j][j] = 1.0;
  }

  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = std::max(options.tolerance, static_cast<double>(m) * eps);
  // Columns at round-off level carry no signal; rotating them against each
  // other never settles.
  const double negligible = static_cast<double>(m) * eps * a.frobenius_norm();
  bool converged = k < 2;
  std::size_t sweep = 0;
  double worst = 0.0;
  for (; !converged && sweep < options.max_sweeps; ++sweep) {
    bool rotated = false;
    worst = 0.0;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        const double alpha = dot(w[p], w[p]);
        const double beta = dot(w[q], w[q]);
        const double gamma = dot(w[p], w[q]);
        if (gamma == 0.0) continue;
        const double np = std::sqrt(alpha);
        const double nq = std::sqrt(beta);
        if (np <= negligible || nq <= negligible) continue;
        const double off = std::fabs(gamma) / np / nq;
        worst = std::max(worst, off);
        if (off <= tol) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(w[p], w[q], c, s);
        rotate(v[p], v[q], c, s);
        rotated = true;
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw NumericError(fmt::format("svd: no convergence after {} sweeps on a {}x{} matrix "
                                   "(largest remaining column cosine {:.3e}, tolerance {:.3e})",
                                   options.max_sweeps, m, k, worst, tol));
  }

  std::vector<double> sigma(k);
  for (std::size_t j = 0; j < k; ++j) sigma[j] = norm(w[j]);
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  RawSvd out;
  const double sigma_max = k ? sigma[order[0]] : 0.0;
  std::vector<std::size_t> zero_slots;
  for (std::size_t idx = 0; idx < k; ++idx) {
    const std::size_t j = order[idx];
    const bool zero = sigma_max == 0.0 || sigma[j] < options.zero_threshold * sigma_max;
    out.sigma.push_back(zero ? 0.0 : sigma[j]);
    out.v.push_back(std::move(v[j]));
    if (zero) {
      out.u.emplace_back();
      zero_slots.push_back(idx);
    } else {
      Column u = std::move(w[j]);
      for (double& x : u) x /= sigma[j];
      out.u.push_back(std::move(u));
    }
  }
  // Zero singular values sort last, so every filled column precedes them.
  for (std::size_t idx : zero_slots) {
    std::vector<Column> basis(out.u.begin(), out.u.begin() + static_cast<std::ptrdiff_t>(idx));
    out.u[idx] = complete_basis(basis, m);
  }
  return out;
}

Matrix to_matrix(const std::vector<Column>& cols, std::size_t rows) {
  Matrix out(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < rows; ++i) out(i, j) = cols[j][i];
  }
  return out;
}

}  // namespace

Matrix SvdResult::reconstruct() const {
  Matrix scaled = u;
  for (std::size_t i = 0; i < scaled.rows(); ++i) {
    for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= singular_values[j];
  }
  return scaled * v.transposed();
}

SvdResult svd(const Matrix& a, const SvdOptions& options) {
  if (!a.all_finite()) throw NumericError("svd: input contains non-finite entries");
  const bool wide = a.cols() > a.rows();
  RawSvd raw = wide ? jacobi_tall(a.transposed(), options) : jacobi_tall(a, options);
  if (wide) std::swap(raw.u, raw.v);

  // Canonical sign: the largest-magnitude entry of each right vector is positive.
  for (std::size_t j = 0; j < raw.v.size(); ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < raw.v[j].size(); ++i) {
      if (std::fabs(raw.v[j][i]) > best) {
        best = std::fabs(raw.v[j][i]);
        arg = i;
      }
    }
    if (!raw.v[j].empty() && raw.v[j][arg] < 0.0) {
      for (double& x : raw.v[j]) x = -x;
      for (double& x : raw.u[j]) x = -x;
    }
  }

  SvdResult out;
  out.u = to_matrix(raw.u, a.rows());
  out.v = to_matrix(raw.v, a.cols());
  out.singular_values = std::move(raw.sigma);
  return out;
}

}  // namespace mediadisc
