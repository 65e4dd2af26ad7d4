// Licensed under the Apache License 2.0 (see LICENSE file).

#include "ytx/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ytx/error.hpp"
#include "ytx/transforms_ctx.hpp"
#include "ytx/transforms_dist.hpp"

namespace ytx {

namespace {

constexpr std::array<std::pair<TransformKind, std::string_view>, 13> kNames{{
    {TransformKind::identity, "identity"},
    {TransformKind::subject_center, "subject-center"},
    {TransformKind::trial_minmax, "trial-minmax"},
    {TransformKind::frame, "frame"},
    {TransformKind::deflate, "deflate"},
    {TransformKind::expectation_norm, "expectation-norm"},
    {TransformKind::regression_norm, "regression-norm"},
    {TransformKind::log_offset, "log-offset"},
    {TransformKind::sqrt, "sqrt"},
    {TransformKind::box_cox, "box-cox"},
    {TransformKind::yeo_johnson, "yeo-johnson"},
    {TransformKind::quantile_normal, "quantile-normal"},
    {TransformKind::quantile_uniform, "quantile-uniform"},
}};

template <class T>
void require_rows(std::span<const T> column, std::size_t row, const char* role) {
  if (column.empty()) throw ConfigError(std::string("transform needs the ") + role + " role column");
  if (row >= column.size()) throw DataError(std::string(role) + " column is shorter than the target vector");
}

const Matrix& require_context(const RowContext& ctx, std::size_t row) {
  if (!ctx.context) throw ConfigError("transform needs the context role columns");
  if (row >= ctx.context->rows()) throw DataError("context matrix is shorter than the target vector");
  return *ctx.context;
}

DomainError with_index(const DomainError& e, std::size_t i) {
  if (e.index()) return e;
  return DomainError(std::string(e.what()) + " (at index " + std::to_string(i) + ")", i);
}

// Key lookups that fail regardless of the value being mapped.
void check_keys(const TransformParams& params, TransformKind kind, std::size_t row, const RowContext& ctx) {
  if (kind == TransformKind::trial_minmax) {
    require_rows(ctx.trial, row, "trial");
    if (!std::get<TrialRange>(params).range.contains(ctx.trial[row])) {
      throw DomainError("unseen trial '" + ctx.trial[row] + "' at index " + std::to_string(row), row);
    }
  } else if (kind == TransformKind::deflate) {
    require_rows(ctx.time, row, "time");
    if (!std::get<DeflationIndex>(params).series.contains(ctx.time[row])) {
      throw DomainError("time key '" + ctx.time[row] + "' missing from the price index at index " +
                            std::to_string(row),
                        row);
    }
  } else if (kind == TransformKind::subject_center) {
    require_rows(ctx.subject, row, "subject");
  } else if (kind == TransformKind::frame) {
    require_rows(ctx.frame, row, "frame");
  } else if (kind == TransformKind::expectation_norm || kind == TransformKind::regression_norm) {
    require_context(ctx, row);
  }
}

}  // namespace

std::string_view to_string(TransformKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<TransformKind> parse_transform_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool is_distributional(TransformKind kind) {
  switch (kind) {
    case TransformKind::log_offset:
    case TransformKind::sqrt:
    case TransformKind::box_cox:
    case TransformKind::yeo_johnson:
    case TransformKind::quantile_normal:
    case TransformKind::quantile_uniform:
      return true;
    default:
      return false;
  }
}

std::pair<double, double> target_range(std::span<const double> y) {
  if (y.empty()) return {0.0, 0.0};
  auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  return {*lo, *hi};
}

FittedTransform::FittedTransform(TransformKind kind, TransformParams params, std::pair<double, double> range)
    : kind_(kind), params_(std::move(params)), range_(range) {}

double FittedTransform::forward_one(double y, std::size_t row, const RowContext& ctx) const {
  check_keys(params_, kind_, row, ctx);
  switch (kind_) {
    case TransformKind::identity:
      return y;
    case TransformKind::subject_center: {
      const auto& s = std::get<SubjectStats>(params_);
      auto it = s.mean.find(ctx.subject[row]);
      return y - (it == s.mean.end() ? s.global_mean : it->second);
    }
    case TransformKind::trial_minmax: {
      const auto [lo, hi] = std::get<TrialRange>(params_).range.at(ctx.trial[row]);
      return (y - lo) / (hi - lo);
    }
    case TransformKind::frame: {
      const double r = ctx.frame[row];
      if (!(r > 0.0)) throw DomainError("frame of reference must be positive", row);
      return y / r;
    }
    case TransformKind::deflate: {
      const auto& idx = std::get<DeflationIndex>(params_);
      return y * idx.series.at(idx.base_time) / idx.series.at(ctx.time[row]);
    }
    case TransformKind::expectation_norm: {
      const auto& m = std::get<ContextModel>(params_);
      auto phi = ctx.context->row(row);
      return (y - ctx::context_mean(m, phi)) / ctx::context_sigma(m, phi);
    }
    case TransformKind::regression_norm:
      return y / ctx::context_denominator(std::get<ContextModel>(params_), ctx.context->row(row));
    case TransformKind::log_offset: {
      const double x = y + std::get<LogOffsetParams>(params_).offset;
      if (!(x > 0.0)) throw DomainError("log-offset: y + offset must be positive");
      return std::log(x);
    }
    case TransformKind::sqrt:
      if (!(y >= 0.0)) throw DomainError("sqrt: negative value");
      return std::sqrt(y);
    case TransformKind::box_cox:
      return dist::box_cox_forward(y, std::get<PowerParams>(params_));
    case TransformKind::yeo_johnson:
      return dist::yeo_johnson_forward(y, std::get<PowerParams>(params_).lambda);
    case TransformKind::quantile_normal:
    case TransformKind::quantile_uniform:
      return dist::quantile_forward(y, std::get<QuantileMap>(params_));
  }
  return y;
}

double FittedTransform::inverse_one(double z, std::size_t row, const RowContext& ctx) const {
  check_keys(params_, kind_, row, ctx);
  double y = z;
  switch (kind_) {
    case TransformKind::identity:
      break;
    case TransformKind::subject_center: {
      const auto& s = std::get<SubjectStats>(params_);
      auto it = s.mean.find(ctx.subject[row]);
      y = z + (it == s.mean.end() ? s.global_mean : it->second);
      break;
    }
    case TransformKind::trial_minmax: {
      const auto [lo, hi] = std::get<TrialRange>(params_).range.at(ctx.trial[row]);
      y = lo + z * (hi - lo);
      break;
    }
    case TransformKind::frame: {
      const double r = ctx.frame[row];
      if (!(r > 0.0)) throw DomainError("frame of reference must be positive", row);
      y = z * r;
      break;
    }
    case TransformKind::deflate: {
      const auto& idx = std::get<DeflationIndex>(params_);
      y = z * idx.series.at(ctx.time[row]) / idx.series.at(idx.base_time);
      break;
    }
    case TransformKind::expectation_norm: {
      const auto& m = std::get<ContextModel>(params_);
      auto phi = ctx.context->row(row);
      y = z * ctx::context_sigma(m, phi) + ctx::context_mean(m, phi);
      break;
    }
    case TransformKind::regression_norm:
      y = z * ctx::context_denominator(std::get<ContextModel>(params_), ctx.context->row(row));
      break;
    case TransformKind::log_offset:
      y = std::exp(z) - std::get<LogOffsetParams>(params_).offset;
      break;
    case TransformKind::sqrt:
      if (!(z >= 0.0)) throw DomainError("sqrt inverse: negative value");
      y = z * z;
      break;
    case TransformKind::box_cox:
      y = dist::box_cox_inverse(z, std::get<PowerParams>(params_));
      break;
    case TransformKind::yeo_johnson:
      y = dist::yeo_johnson_inverse(z, std::get<PowerParams>(params_).lambda);
      break;
    case TransformKind::quantile_normal:
    case TransformKind::quantile_uniform:
      y = dist::quantile_inverse(z, std::get<QuantileMap>(params_));
      break;
  }
  if (!std::isfinite(y)) throw DomainError("inverse produced a non-finite value");
  return y;
}

std::vector<double> FittedTransform::forward(std::span<const double> y, const RowContext& ctx) const {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    try {
      out[i] = forward_one(y[i], i, ctx);
      if (!std::isfinite(out[i])) throw DomainError("forward produced a non-finite value");
    } catch (const DomainError& e) {
      throw with_index(e, i);
    }
  }
  return out;
}

std::vector<double> FittedTransform::inverse(std::span<const double> z, const RowContext& ctx) const {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    try {
      out[i] = inverse_one(z[i], i, ctx);
    } catch (const DomainError& e) {
      throw with_index(e, i);
    }
  }
  return out;
}

std::vector<double> FittedTransform::inverse_clamped(std::span<const double> z, const RowContext& ctx,
                                                     std::size_t& clamped) const {
  std::vector<double> out(z.size());
  double pivot = 0.0;
  if (is_distributional(kind_)) {
    pivot = forward_one(0.5 * (range_.first + range_.second), 0, ctx);
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    try {
      check_keys(params_, kind_, i, ctx);
    } catch (const DomainError& e) {
      throw with_index(e, i);
    }
    try {
      out[i] = inverse_one(z[i], i, ctx);
    } catch (const DomainError&) {
      out[i] = z[i] < pivot ? range_.first : range_.second;
      ++clamped;
    }
  }
  return out;
}

FittedTransform fit_transform(TransformKind kind, const Dataset& data, const FitOptions& options) {
  const auto& y = data.target;
  auto need = [&](bool present, const char* role) {
    if (!present) throw ConfigError(std::string(to_string(kind)) + " needs the " + role + " role");
  };
  switch (kind) {
    case TransformKind::identity:
      return FittedTransform(kind, IdentityParams{}, target_range(y));
    case TransformKind::subject_center:
      need(!data.subject_keys.empty(), "subject");
      return ctx::fit_subject_center(y, data.subject_keys);
    case TransformKind::trial_minmax:
      need(!data.trial_keys.empty(), "trial");
      return ctx::fit_trial_minmax(y, data.trial_keys);
    case TransformKind::frame:
      need(!data.frame.empty(), "frame");
      return ctx::fit_frame_normalize(y, data.frame);
    case TransformKind::deflate: {
      need(!data.time_keys.empty(), "time");
      DeflationIndex index;
      if (options.deflation_index) {
        index = *options.deflation_index;
        if (options.base_time) index.base_time = *options.base_time;
      } else {
        need(!data.price_index.empty(), "price_index");
        index = ctx::make_deflation_index(data.time_keys, data.price_index, options.base_time);
      }
      return ctx::fit_deflate(y, data.time_keys, index);
    }
    case TransformKind::expectation_norm:
      need(!data.context.empty(), "context");
      return ctx::fit_expectation_normalize(y, data.context);
    case TransformKind::regression_norm:
      need(!data.context.empty(), "context");
      return ctx::fit_regression_normalize(y, data.context);
    case TransformKind::log_offset:
      return dist::fit_log_offset(y);
    case TransformKind::sqrt:
      return dist::fit_sqrt(y);
    case TransformKind::box_cox:
      return dist::fit_box_cox(y);
    case TransformKind::yeo_johnson:
      return dist::fit_yeo_johnson(y);
    case TransformKind::quantile_normal:
      return dist::fit_quantile(y, QuantileReference::normal);
    case TransformKind::quantile_uniform:
      return dist::fit_quantile(y, QuantileReference::uniform);
  }
  throw ConfigError("unknown transform kind");
}

}  // namespace ytx
