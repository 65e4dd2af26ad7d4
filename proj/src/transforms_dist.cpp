// Licensed under the Apache License 2.0 (see LICENSE file).

#include "ytx/transforms_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ytx/error.hpp"

namespace ytx::dist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_non_constant(std::span<const double> y) {
  auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*lo == *hi) throw DataError("degenerate target: all values are equal");
}

double biased_variance(std::span<const double> t) {
  const double n = static_cast<double>(t.size());
  const double mean = std::accumulate(t.begin(), t.end(), 0.0) / n;
  double s = 0.0;
  for (double v : t) s += (v - mean) * (v - mean);
  return s / n;
}

// (x^λ - 1)/λ evaluated stably for small |λ|; x > 0.
double power_map(double x, double lambda) {
  const double lx = std::log(x);
  if (lambda == 0.0) return lx;
  return std::expm1(lambda * lx) / lambda;
}

// Inverse of power_map; throws when 1 + λz <= 0.
double power_unmap(double z, double lambda) {
  if (lambda == 0.0) return std::exp(z);
  const double arg = lambda * z;
  if (!(arg > -1.0)) throw DomainError("value outside the inverse power-transform domain");
  return std::exp(std::log1p(arg) / lambda);
}

/// Maximizes a profile log-likelihood over λ ∈ [kLambdaMin, kLambdaMax]: a
/// 101-point grid, then golden-section search around the best grid point.
template <class F>
std::pair<double, double> maximize_lambda(F&& llf) {
  constexpr int kGrid = 101;
  constexpr double kStep = (kLambdaMax - kLambdaMin) / (kGrid - 1);
  double best_lambda = kLambdaMin;
  double best_value = kNegInf;
  for (int k = 0; k < kGrid; ++k) {
    const double lambda = kLambdaMin + k * kStep;
    const double v = llf(lambda);
    if (v > best_value) {
      best_value = v;
      best_lambda = lambda;
    }
  }

  double a = std::max(kLambdaMin, best_lambda - kStep);
  double b = std::min(kLambdaMax, best_lambda + kStep);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = llf(c);
  double fd = llf(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = llf(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = llf(d);
    }
  }
  const double refined = 0.5 * (a + b);
  const double refined_value = llf(refined);
  if (refined_value >= best_value) return {refined, refined_value};
  return {best_lambda, best_value};
}

}  // namespace

// ---------------------------------------------------------------- log / sqrt

double log_offset_of(std::span<const double> y) {
  if (y.empty()) throw DataError("log-offset needs at least one target value");
  double offset = 1.0;
  double min_y = y[0];
  for (double v : y) {
    offset = std::max(offset, std::ceil(-v));
    min_y = std::min(min_y, v);
  }
  // ⌈−y⌉ lands exactly on −y for negative integers; step past zero.
  if (!(min_y + offset > 0.0)) offset += 1.0;
  return offset;
}

FittedTransform fit_log_offset(std::span<const double> y) {
  return FittedTransform(TransformKind::log_offset, LogOffsetParams{log_offset_of(y)}, target_range(y));
}

FittedTransform fit_sqrt(std::span<const double> y) {
  if (y.empty()) throw DataError("sqrt needs at least one target value");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0.0) {
      throw DomainError("sqrt: negative target " + std::to_string(y[i]) + " at index " + std::to_string(i), i);
    }
  }
  return FittedTransform(TransformKind::sqrt, SqrtParams{}, target_range(y));
}

// ------------------------------------------------------------------ Box-Cox

double box_cox_shift(std::span<const double> y) {
  auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double spread = *hi - *lo;
  const double margin = 1e-6 * (spread > 0.0 ? spread : 1.0);
  return *lo >= margin ? 0.0 : margin - *lo;
}

double box_cox_log_likelihood(std::span<const double> x, double lambda) {
  std::vector<double> t(x.size());
  double log_sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    t[i] = power_map(x[i], lambda);
    if (!std::isfinite(t[i])) return kNegInf;
    log_sum += std::log(x[i]);
  }
  const double var = biased_variance(t);
  if (!(var > 0.0) || !std::isfinite(var)) return kNegInf;
  const double n = static_cast<double>(x.size());
  return (lambda - 1.0) * log_sum - 0.5 * n * std::log(var);
}

double box_cox_forward(double y, const PowerParams& p) {
  const double x = y + p.shift;
  if (!(x > 0.0)) throw DomainError("box-cox: shifted value must be positive");
  return power_map(x, p.lambda);
}

double box_cox_inverse(double z, const PowerParams& p) {
  const double x = power_unmap(z, p.lambda);
  if (!std::isfinite(x)) throw DomainError("box-cox: inverse overflow");
  return x - p.shift;
}

FittedTransform fit_box_cox(std::span<const double> y) {
  if (y.size() < 2) throw DataError("box-cox needs at least two target values");
  require_non_constant(y);
  PowerParams params;
  params.shift = box_cox_shift(y);
  std::vector<double> x(y.begin(), y.end());
  for (double& v : x) v += params.shift;
  auto [lambda, llf] = maximize_lambda([&](double l) { return box_cox_log_likelihood(x, l); });
  params.lambda = lambda;
  params.log_likelihood = llf;
  return FittedTransform(TransformKind::box_cox, params, target_range(y));
}

// -------------------------------------------------------------- Yeo-Johnson

double yeo_johnson_forward(double y, double lambda) {
  if (y >= 0.0) {
    const double l = std::log1p(y);
    return lambda == 0.0 ? l : std::expm1(lambda * l) / lambda;
  }
  const double mu = 2.0 - lambda;
  const double l = std::log1p(-y);
  return mu == 0.0 ? -l : -std::expm1(mu * l) / mu;
}

double yeo_johnson_inverse(double z, double lambda) {
  double y;
  if (z >= 0.0) {
    if (lambda == 0.0) {
      y = std::expm1(z);
    } else {
      const double arg = lambda * z;
      if (!(arg > -1.0)) throw DomainError("yeo-johnson: value outside the inverse domain");
      y = std::expm1(std::log1p(arg) / lambda);
    }
  } else {
    const double mu = 2.0 - lambda;
    if (mu == 0.0) {
      y = -std::expm1(-z);
    } else {
      const double arg = -mu * z;
      if (!(arg > -1.0)) throw DomainError("yeo-johnson: value outside the inverse domain");
      y = -std::expm1(std::log1p(arg) / mu);
    }
  }
  if (!std::isfinite(y)) throw DomainError("yeo-johnson: inverse overflow");
  return y;
}

double yeo_johnson_log_likelihood(std::span<const double> y, double lambda) {
  std::vector<double> t(y.size());
  double jacobian = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    t[i] = yeo_johnson_forward(y[i], lambda);
    if (!std::isfinite(t[i])) return kNegInf;
    jacobian += std::copysign(std::log1p(std::abs(y[i])), y[i]);
  }
  const double var = biased_variance(t);
  if (!(var > 0.0) || !std::isfinite(var)) return kNegInf;
  const double n = static_cast<double>(y.size());
  return -0.5 * n * std::log(var) + (lambda - 1.0) * jacobian;
}

FittedTransform fit_yeo_johnson(std::span<const double> y) {
  if (y.size() < 2) throw DataError("yeo-johnson needs at least two target values");
  require_non_constant(y);
  auto [lambda, llf] = maximize_lambda([&](double l) { return yeo_johnson_log_likelihood(y, l); });
  return FittedTransform(TransformKind::yeo_johnson, PowerParams{lambda, 0.0, llf}, target_range(y));
}

// ----------------------------------------------------------------- quantile

FittedTransform fit_quantile(std::span<const double> y, QuantileReference reference) {
  if (y.size() < 10) throw DataError("too few samples for quantile map (need at least 10)");
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const std::size_t q = std::min<std::size_t>(1000, n);

  QuantileMap map;
  map.reference = reference;
  map.knots.resize(q);
  for (std::size_t k = 0; k < q; ++k) {
    const double h = static_cast<double>(n - 1) * static_cast<double>(k) / static_cast<double>(q - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    map.knots[k] = sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  }
  map.knots.front() = sorted.front();
  map.knots.back() = sorted.back();
  for (std::size_t k = 1; k < q; ++k) map.knots[k] = std::max(map.knots[k], map.knots[k - 1]);

  const auto kind = reference == QuantileReference::normal ? TransformKind::quantile_normal
                                                           : TransformKind::quantile_uniform;
  return FittedTransform(kind, std::move(map), target_range(y));
}

double quantile_forward(double y, const QuantileMap& map) {
  if (std::isnan(y)) throw DomainError("quantile: NaN input");
  const auto& knots = map.knots;
  const double last = static_cast<double>(knots.size() - 1);
  double p0;
  if (y <= knots.front()) {
    p0 = 0.0;
  } else if (y >= knots.back()) {
    p0 = 1.0;
  } else {
    const auto lo = static_cast<std::size_t>(std::lower_bound(knots.begin(), knots.end(), y) - knots.begin());
    const auto hi = static_cast<std::size_t>(std::upper_bound(knots.begin(), knots.end(), y) - knots.begin());
    if (lo < hi) {
      // y sits on a run of tied knots: take the middle of their probabilities.
      p0 = 0.5 * (static_cast<double>(lo) + static_cast<double>(hi - 1)) / last;
    } else {
      const double t = (y - knots[lo - 1]) / (knots[lo] - knots[lo - 1]);
      p0 = (static_cast<double>(lo - 1) + t) / last;
    }
  }
  const double eps = map.clip_epsilon;
  const double p = eps + (1.0 - 2.0 * eps) * p0;
  return map.reference == QuantileReference::uniform ? p : normal_ppf(p);
}

double quantile_inverse(double z, const QuantileMap& map) {
  if (std::isnan(z)) throw DomainError("quantile: NaN input");
  const double p = map.reference == QuantileReference::uniform ? z : normal_cdf(z);
  const double eps = map.clip_epsilon;
  const double p0 = std::clamp((p - eps) / (1.0 - 2.0 * eps), 0.0, 1.0);
  const auto& knots = map.knots;
  const double h = p0 * static_cast<double>(knots.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(std::floor(h)), knots.size() - 1);
  if (k + 1 >= knots.size()) return knots.back();
  const double t = h - static_cast<double>(k);
  if (t == 0.0) return knots[k];
  return knots[k] + t * (knots[k + 1] - knots[k]);
}

// ----------------------------------------------------------------- skewness

double skewness(std::span<const double> y) {
  if (y.size() < 3) throw DataError("skewness needs at least three values");
  auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*lo == *hi) throw DataError("skewness undefined: zero variance");
  const double n = static_cast<double>(y.size());
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : y) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (!(m2 > 0.0)) throw DataError("skewness undefined: zero variance");
  return m3 / std::pow(m2, 1.5);
}

}  // namespace ytx::dist
