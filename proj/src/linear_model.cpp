// Licensed under the Apache License 2.0 (see LICENSE file).

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ytx/error.hpp"
#include "ytx/eval.hpp"

namespace ytx::eval {

namespace {

double soft_threshold(double value, double alpha) {
  if (value > alpha) return value - alpha;
  if (value < -alpha) return value + alpha;
  return 0.0;
}

void check_shapes(const Matrix& x, std::span<const double> y) {
  if (x.rows() != y.size()) throw DataError("feature rows and target length differ");
  if (y.size() < 2) throw DataError("linear models need at least two rows");
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ridge: return "ridge";
    case ModelKind::lasso: return "lasso";
    case ModelKind::gbtr: return "gbtr";
    case ModelKind::svr: return "svr";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (auto k : {ModelKind::ridge, ModelKind::lasso, ModelKind::gbtr, ModelKind::svr}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

double default_alpha(ModelKind kind) { return kind == ModelKind::lasso ? 0.01 : 1.0; }

Standardization standardize(const Matrix& x, std::vector<bool>* constant) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  Standardization s;
  s.means.assign(d, 0.0);
  s.stds.assign(d, 1.0);
  s.z = Matrix(n, d);
  if (constant) constant->assign(d, false);
  for (std::size_t j = 0; j < d; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += x(i, j);
    m /= static_cast<double>(n);
    double ss = 0.0;
    bool all_equal = true;
    for (std::size_t i = 0; i < n; ++i) {
      ss += (x(i, j) - m) * (x(i, j) - m);
      all_equal = all_equal && x(i, j) == x(0, j);
    }
    s.means[j] = m;
    if (all_equal) {
      if (constant) (*constant)[j] = true;
      continue;  // z column stays 0
    }
    s.stds[j] = std::sqrt(ss / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) s.z(i, j) = (x(i, j) - m) / s.stds[j];
  }
  return s;
}

double LinearModel::predict_one(std::span<const double> x) const {
  double s = intercept;
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    s += coefficients[j] * (x[j] - feature_means[j]) / feature_stds[j];
  }
  return s;
}

std::vector<double> LinearModel::predict(const Matrix& x) const {
  if (x.cols() != coefficients.size()) throw DataError("feature count differs from the fitted model");
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_one(x.row(i));
  return out;
}

std::vector<double> LinearModel::raw_coefficients() const {
  std::vector<double> out(coefficients.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = coefficients[j] / feature_stds[j];
  return out;
}

double LinearModel::raw_intercept() const {
  double s = intercept;
  for (std::size_t j = 0; j < coefficients.size(); ++j) s -= coefficients[j] * feature_means[j] / feature_stds[j];
  return s;
}

LinearModel fit_ridge(const Matrix& x, std::span<const double> y, double alpha) {
  check_shapes(x, y);
  if (!(alpha >= 0.0)) throw ConfigError("ridge alpha must be non-negative");
  std::vector<bool> constant;
  auto s = standardize(x, &constant);

  LinearModel m;
  m.kind = ModelKind::ridge;
  m.alpha = alpha;
  m.feature_means = s.means;
  m.feature_stds = s.stds;
  m.coefficients.assign(x.cols(), 0.0);
  m.intercept = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    if (!constant[j]) active.push_back(j);
  }
  if (active.empty()) return m;

  const std::size_t p = active.size();
  Matrix gram(p, p);
  std::vector<double> rhs(p, 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double yc = y[i] - m.intercept;
    for (std::size_t a = 0; a < p; ++a) {
      const double za = s.z(i, active[a]);
      rhs[a] += za * yc;
      for (std::size_t b = 0; b <= a; ++b) gram(a, b) += za * s.z(i, active[b]);
    }
  }
  for (std::size_t a = 0; a < p; ++a) {
    gram(a, a) += alpha;
    for (std::size_t b = 0; b < a; ++b) gram(b, a) = gram(a, b);
  }
  std::vector<double> beta;
  if (!linalg::cholesky_solve(gram, rhs, beta)) {
    throw ConfigError("ridge system is numerically singular; use alpha > 0");
  }
  for (std::size_t a = 0; a < p; ++a) m.coefficients[active[a]] = beta[a];
  return m;
}

double lasso_objective(const Matrix& z, std::span<const double> centered_y, std::span<const double> beta,
                       double alpha) {
  const std::size_t n = z.rows();
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = centered_y[i];
    for (std::size_t j = 0; j < beta.size(); ++j) r -= z(i, j) * beta[j];
    rss += r * r;
  }
  double l1 = 0.0;
  for (double b : beta) l1 += std::abs(b);
  return rss / (2.0 * static_cast<double>(n)) + alpha * l1;
}

LinearModel fit_lasso(const Matrix& x, std::span<const double> y, double alpha, const LassoOptions& options) {
  check_shapes(x, y);
  if (!(alpha >= 0.0)) throw ConfigError("lasso alpha must be non-negative");
  std::vector<bool> constant;
  auto s = standardize(x, &constant);
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const double nd = static_cast<double>(n);

  LinearModel m;
  m.kind = ModelKind::lasso;
  m.alpha = alpha;
  m.feature_means = s.means;
  m.feature_stds = s.stds;
  m.coefficients.assign(d, 0.0);
  m.intercept = std::accumulate(y.begin(), y.end(), 0.0) / nd;

  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = y[i] - m.intercept;
  std::vector<double> residual = centered;

  // Column-major copy for the inner loops.
  std::vector<std::vector<double>> cols(d, std::vector<double>(n));
  std::vector<double> col_scale(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) cols[j][i] = s.z(i, j);
    for (double v : cols[j]) col_scale[j] += v * v;
    col_scale[j] /= nd;
  }

  auto& beta = m.coefficients;
  m.converged = false;
  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (constant[j] || col_scale[j] == 0.0) continue;
      const auto& zj = cols[j];
      double rho = 0.0;
      for (std::size_t i = 0; i < n; ++i) rho += zj[i] * residual[i];
      rho = rho / nd + col_scale[j] * beta[j];
      const double updated = soft_threshold(rho, alpha) / col_scale[j];
      const double delta = updated - beta[j];
      if (delta != 0.0) {
        for (std::size_t i = 0; i < n; ++i) residual[i] -= zj[i] * delta;
        beta[j] = updated;
      }
      max_change = std::max(max_change, std::abs(delta));
    }
    m.sweeps = sweep + 1;
    if (options.record_objective) m.objective_history.push_back(lasso_objective(s.z, centered, beta, alpha));
    if (max_change < options.tolerance) {
      m.converged = true;
      break;
    }
  }
  return m;
}

}  // namespace ytx::eval
