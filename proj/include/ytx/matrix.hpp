// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace ytx {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double> column(std::size_t c) const;
  std::span<const double> data() const noexcept { return data_; }

  /// Rows picked by index, in the given order.
  Matrix select_rows(std::span<const std::size_t> indices) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

namespace linalg {

/// Result of a rank-revealing least-squares solve.
struct LeastSquaresFit {
  std::vector<double> coefficients;  // intercept first when requested
  std::vector<double> fitted;
  std::vector<double> residuals;
  std::size_t rank = 0;
  bool full_rank = false;
};

/// Least squares of y on [1, X] (or X alone) by Householder QR with column
/// pivoting. Columns numerically dependent on earlier pivots get coefficient 0.
LeastSquaresFit least_squares(const Matrix& x, std::span<const double> y, bool intercept = true);

/// Solves the symmetric positive definite system a·x = b by Cholesky.
/// Returns false when a is not numerically positive definite.
bool cholesky_solve(Matrix a, std::span<const double> b, std::vector<double>& x);

}  // namespace linalg
}  // namespace ytx
