// Licensed under the Apache License 2.0 (see LICENSE file).

#include "ytx/transforms_ctx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ytx/csv.hpp"
#include "ytx/error.hpp"

namespace ytx::ctx {

namespace {

void require_same_length(std::size_t n, std::size_t m, const char* what) {
  if (n != m) {
    throw DataError(std::string(what) + " has " + std::to_string(m) + " entries, target has " +
                    std::to_string(n));
  }
}

struct ContextFit {
  double intercept;
  std::vector<double> coefficients;
  std::vector<double> fitted;
  std::vector<double> residuals;
};

ContextFit fit_context_ols(std::span<const double> y, const Matrix& context) {
  const std::size_t k = context.cols();
  if (k == 0) throw ConfigError("contextual normalization needs at least one context column");
  require_same_length(y.size(), context.rows(), "context matrix");
  if (y.size() <= k + 1) {
    throw DataError("contextual normalization needs more than " + std::to_string(k + 1) + " rows");
  }
  auto fit = linalg::least_squares(context, y);
  if (!fit.full_rank) throw DataError("collinear context: design matrix is singular");
  return {fit.coefficients[0], {fit.coefficients.begin() + 1, fit.coefficients.end()},
          std::move(fit.fitted), std::move(fit.residuals)};
}

double linear(double intercept, const std::vector<double>& beta, std::span<const double> phi) {
  double s = intercept;
  for (std::size_t j = 0; j < beta.size(); ++j) s += beta[j] * phi[j];
  return s;
}

}  // namespace

FittedTransform fit_subject_center(std::span<const double> y, std::span<const std::string> subject) {
  if (y.empty()) throw DataError("subject centering needs a non-empty dataset");
  require_same_length(y.size(), subject.size(), "subject column");
  SubjectStats stats;
  std::map<std::string, double> sums;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sums[subject[i]] += y[i];
    ++stats.count[subject[i]];
  }
  for (const auto& [key, sum] : sums) stats.mean[key] = sum / static_cast<double>(stats.count[key]);
  stats.global_mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  return FittedTransform(TransformKind::subject_center, std::move(stats), target_range(y));
}

FittedTransform fit_trial_minmax(std::span<const double> y, std::span<const std::string> trial) {
  if (y.empty()) throw DataError("trial min-max needs a non-empty dataset");
  require_same_length(y.size(), trial.size(), "trial column");
  TrialRange ranges;
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto [it, inserted] = ranges.range.try_emplace(trial[i], y[i], y[i]);
    if (!inserted) {
      it->second.first = std::min(it->second.first, y[i]);
      it->second.second = std::max(it->second.second, y[i]);
    }
  }
  for (const auto& [key, r] : ranges.range) {
    if (r.first == r.second) throw DataError("constant trial '" + key + "': min equals max");
  }
  return FittedTransform(TransformKind::trial_minmax, std::move(ranges), target_range(y));
}

FittedTransform fit_frame_normalize(std::span<const double> y, std::span<const double> frame) {
  require_same_length(y.size(), frame.size(), "frame column");
  if (y.empty()) throw DataError("frame normalization needs a non-empty dataset");
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (!(frame[i] > 0.0)) {
      throw DomainError("frame of reference must be positive, got " + csv::format_number(frame[i]) +
                            " at index " + std::to_string(i),
                        i);
    }
  }
  return FittedTransform(TransformKind::frame, FrameParams{}, target_range(y));
}

FittedTransform fit_deflate(std::span<const double> y, std::span<const std::string> time,
                            const DeflationIndex& index) {
  require_same_length(y.size(), time.size(), "time column");
  if (y.empty()) throw DataError("deflation needs a non-empty dataset");
  for (const auto& [key, z] : index.series) {
    if (!(z > 0.0)) throw DataError("price index must be positive at time '" + key + "'");
  }
  if (!index.series.contains(index.base_time)) {
    throw DataError("base time '" + index.base_time + "' missing from the price index");
  }
  for (std::size_t i = 0; i < time.size(); ++i) {
    if (!index.series.contains(time[i])) {
      throw DomainError("time key '" + time[i] + "' (index " + std::to_string(i) +
                            ") missing from the price index",
                        i);
    }
  }
  return FittedTransform(TransformKind::deflate, index, target_range(y));
}

FittedTransform fit_expectation_normalize(std::span<const double> y, const Matrix& context) {
  auto mean_fit = fit_context_ols(y, context);

  std::vector<double> abs_residual(mean_fit.residuals.size());
  std::transform(mean_fit.residuals.begin(), mean_fit.residuals.end(), abs_residual.begin(),
                 [](double r) { return std::abs(r); });
  auto scale_fit = linalg::least_squares(context, abs_residual);

  // E|r| = σ·√(2/π) for Gaussian residuals; rescale so the model estimates σ.
  const double consistency = std::sqrt(std::numbers::pi / 2.0);

  const double n = static_cast<double>(y.size());
  double ss = 0.0;
  for (double r : mean_fit.residuals) ss += r * r;
  const double residual_std = std::sqrt(ss / n);
  double max_abs_y = 1.0;
  for (double v : y) max_abs_y = std::max(max_abs_y, std::abs(v));

  ContextModel model;
  model.mode = ContextMode::expectation_norm;
  model.intercept = mean_fit.intercept;
  model.coefficients = std::move(mean_fit.coefficients);
  model.sigma_intercept = consistency * scale_fit.coefficients[0];
  model.sigma_coefficients.assign(scale_fit.coefficients.begin() + 1, scale_fit.coefficients.end());
  for (double& b : model.sigma_coefficients) b *= consistency;
  model.sigma_floor = std::max(0.1 * residual_std, 1e-9 * max_abs_y);
  return FittedTransform(TransformKind::expectation_norm, std::move(model), target_range(y));
}

FittedTransform fit_regression_normalize(std::span<const double> y, const Matrix& context) {
  auto fit = fit_context_ols(y, context);
  double max_abs_y = 1.0;
  for (double v : y) max_abs_y = std::max(max_abs_y, std::abs(v));

  ContextModel model;
  model.mode = ContextMode::regression_norm;
  model.intercept = fit.intercept;
  model.coefficients = std::move(fit.coefficients);
  model.denom_floor = 1e-6 * max_abs_y;
  for (std::size_t i = 0; i < fit.fitted.size(); ++i) {
    if (std::abs(fit.fitted[i]) < model.denom_floor) {
      throw DataError("zero denominator: predicted context value " + csv::format_number(fit.fitted[i]) +
                      " at training row " + std::to_string(i));
    }
  }
  return FittedTransform(TransformKind::regression_norm, std::move(model), target_range(y));
}

double context_mean(const ContextModel& m, std::span<const double> phi) {
  return linear(m.intercept, m.coefficients, phi);
}

double context_sigma(const ContextModel& m, std::span<const double> phi) {
  return std::max(linear(m.sigma_intercept, m.sigma_coefficients, phi), m.sigma_floor);
}

double context_denominator(const ContextModel& m, std::span<const double> phi, bool* clamped) {
  double d = linear(m.intercept, m.coefficients, phi);
  const bool small = std::abs(d) < m.denom_floor;
  if (small) d = d < 0.0 ? -m.denom_floor : m.denom_floor;
  if (clamped) *clamped = small;
  return d;
}

bool all_numeric_keys(std::span<const std::string> keys) {
  return std::all_of(keys.begin(), keys.end(), [](const std::string& k) { return parse_number(k).has_value(); });
}

bool time_key_less(const std::string& a, const std::string& b, bool numeric) {
  if (numeric) return *parse_number(a) < *parse_number(b);
  return a < b;
}

DeflationIndex make_deflation_index(std::span<const std::string> time, std::span<const double> values,
                                    std::optional<std::string> base_time) {
  if (time.size() != values.size()) throw DataError("price index key and value columns differ in length");
  if (time.empty()) throw DataError("price index is empty");
  DeflationIndex index;
  for (std::size_t i = 0; i < time.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw DomainError("price index value for time '" + time[i] + "' must be positive", i);
    }
    auto [it, inserted] = index.series.try_emplace(time[i], values[i]);
    if (!inserted && it->second != values[i]) {
      throw DataError("price index has conflicting values for time '" + time[i] + "'");
    }
  }
  if (base_time) {
    index.base_time = *base_time;
  } else {
    std::vector<std::string> keys;
    for (const auto& [k, v] : index.series) keys.push_back(k);
    const bool numeric = all_numeric_keys(keys);
    index.base_time = *std::max_element(keys.begin(), keys.end(), [numeric](const auto& a, const auto& b) {
      return time_key_less(a, b, numeric);
    });
  }
  if (!index.series.contains(index.base_time)) {
    throw DataError("base time '" + index.base_time + "' missing from the price index");
  }
  return index;
}

DeflationIndex load_deflation_index(const std::filesystem::path& path, std::optional<std::string> base_time) {
  auto table = csv::read(path);
  if (table.header.size() != 2) throw DataError("price index CSV must have exactly two columns");
  std::vector<std::string> keys;
  std::vector<double> values;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    auto v = parse_number(table.rows[r][1]);
    if (!v) throw DataError("price index CSV row " + std::to_string(r + 1) + " has a non-numeric value");
    std::string key = table.rows[r][0];
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    keys.push_back(std::move(key));
    values.push_back(*v);
  }
  return make_deflation_index(keys, values, std::move(base_time));
}

}  // namespace ytx::ctx
