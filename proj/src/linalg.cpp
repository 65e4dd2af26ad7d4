// Licensed under the Apache License 2.0 (see LICENSE file).

#include "ytx/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ytx {

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

namespace linalg {

namespace {

constexpr double kDependenceTolerance = 1e-9;

}  // namespace

LeastSquaresFit least_squares(const Matrix& x, std::span<const double> y, bool intercept) {
  const std::size_t n = x.rows();
  const std::size_t offset = intercept ? 1 : 0;
  const std::size_t p = x.cols() + offset;

  // Column-major working copy of the design.
  std::vector<std::vector<double>> a(p, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (intercept) a[0][i] = 1.0;
    for (std::size_t j = 0; j < x.cols(); ++j) a[j + offset][i] = x(i, j);
  }
  std::vector<double> qty(y.begin(), y.end());

  std::vector<double> original_norm(p);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (double v : a[j]) s += v * v;
    original_norm[j] = std::sqrt(s);
  }

  std::vector<std::size_t> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t rank = 0;
  const std::size_t steps = std::min(n, p);

  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t best = p;
    double best_norm = 0.0;
    for (std::size_t j = k; j < p; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += a[j][i] * a[j][i];
      const double norm = std::sqrt(s);
      if (norm <= kDependenceTolerance * original_norm[perm[j]] || norm == 0.0) continue;
      if (norm > best_norm) {
        best_norm = norm;
        best = j;
      }
    }
    if (best == p) break;
    std::swap(a[k], a[best]);
    std::swap(perm[k], perm[best]);

    // Householder reflector zeroing a[k][k+1..n).
    auto& col = a[k];
    const double alpha = col[k] > 0 ? -best_norm : best_norm;
    std::vector<double> v(col.begin() + static_cast<std::ptrdiff_t>(k), col.end());
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (double t : v) vnorm2 += t * t;
    if (vnorm2 > 0.0) {
      auto reflect = [&](std::vector<double>& target) {
        double dot = 0.0;
        for (std::size_t i = k; i < n; ++i) dot += v[i - k] * target[i];
        const double scale = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < n; ++i) target[i] -= scale * v[i - k];
      };
      for (std::size_t j = k + 1; j < p; ++j) reflect(a[j]);
      reflect(qty);
    }
    col[k] = alpha;
    for (std::size_t i = k + 1; i < n; ++i) col[i] = 0.0;
    ++rank;
  }

  // Back substitution on the leading rank×rank block of R.
  std::vector<double> b(rank, 0.0);
  for (std::size_t kk = rank; kk-- > 0;) {
    double s = qty[kk];
    for (std::size_t j = kk + 1; j < rank; ++j) s -= a[j][kk] * b[j];
    b[kk] = s / a[kk][kk];
  }

  LeastSquaresFit fit;
  fit.coefficients.assign(p, 0.0);
  for (std::size_t kk = 0; kk < rank; ++kk) fit.coefficients[perm[kk]] = b[kk];
  fit.rank = rank;
  fit.full_rank = rank == p;
  fit.fitted.assign(n, 0.0);
  fit.residuals.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = intercept ? fit.coefficients[0] : 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) s += fit.coefficients[j + offset] * x(i, j);
    fit.fitted[i] = s;
    fit.residuals[i] = y[i] - s;
  }
  return fit;
}

bool cholesky_solve(Matrix a, std::span<const double> b, std::vector<double>& x) {
  const std::size_t n = a.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
  const double floor = 1e-12 * std::max(max_diag, 1e-300);

  // Lower factor stored in place.
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > floor)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  x.assign(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * x[k];
    x[i] = s / a(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(k, i) * x[k];
    x[i] = s / a(i, i);
  }
  return true;
}

}  // namespace linalg
}  // namespace ytx
