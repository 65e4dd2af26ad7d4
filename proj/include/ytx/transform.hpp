// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ytx/dataset.hpp"

namespace ytx {

enum class TransformKind {
  identity,
  subject_center,
  trial_minmax,
  frame,
  deflate,
  expectation_norm,
  regression_norm,
  log_offset,
  sqrt,
  box_cox,
  yeo_johnson,
  quantile_normal,
  quantile_uniform,
};

inline constexpr TransformKind kAllTransformKinds[] = {
    TransformKind::identity,         TransformKind::subject_center, TransformKind::trial_minmax,
    TransformKind::frame,            TransformKind::deflate,        TransformKind::expectation_norm,
    TransformKind::regression_norm,  TransformKind::log_offset,     TransformKind::sqrt,
    TransformKind::box_cox,          TransformKind::yeo_johnson,    TransformKind::quantile_normal,
    TransformKind::quantile_uniform,
};

std::string_view to_string(TransformKind kind);
std::optional<TransformKind> parse_transform_kind(std::string_view name);

/// Kinds whose forward map is a fixed monotone function of y alone.
bool is_distributional(TransformKind kind);

struct IdentityParams {
  bool operator==(const IdentityParams&) const = default;
};

struct LogOffsetParams {
  double offset = 1.0;
  bool operator==(const LogOffsetParams&) const = default;
};

struct SqrtParams {
  bool operator==(const SqrtParams&) const = default;
};

/// Box-Cox / Yeo-Johnson state.
struct PowerParams {
  double lambda = 1.0;
  double shift = 0.0;  // Box-Cox positivity shift; 0 for Yeo-Johnson
  double log_likelihood = 0.0;
  bool operator==(const PowerParams&) const = default;
};

enum class QuantileReference { normal, uniform };

struct QuantileMap {
  std::vector<double> knots;  // training quantiles at probabilities k/(Q-1)
  QuantileReference reference = QuantileReference::normal;
  double clip_epsilon = 1e-7;
  bool operator==(const QuantileMap&) const = default;
};

struct SubjectStats {
  std::map<std::string, double> mean;
  std::map<std::string, std::size_t> count;
  double global_mean = 0.0;
  bool operator==(const SubjectStats&) const = default;
};

struct TrialRange {
  std::map<std::string, std::pair<double, double>> range;
  bool operator==(const TrialRange&) const = default;
};

struct FrameParams {
  bool operator==(const FrameParams&) const = default;
};

struct DeflationIndex {
  std::map<std::string, double> series;
  std::string base_time;
  bool operator==(const DeflationIndex&) const = default;
};

enum class ContextMode { expectation_norm, regression_norm };

/// Linear model(s) over the context columns. Expectation normalization uses
/// the second model for the conditional scale; regression normalization only
/// the first.
struct ContextModel {
  ContextMode mode = ContextMode::expectation_norm;
  double intercept = 0.0;
  std::vector<double> coefficients;
  double sigma_intercept = 0.0;
  std::vector<double> sigma_coefficients;
  double sigma_floor = 0.0;
  double denom_floor = 0.0;
  bool operator==(const ContextModel&) const = default;
};

using TransformParams =
    std::variant<IdentityParams, LogOffsetParams, SqrtParams, PowerParams, QuantileMap, SubjectStats,
                 TrialRange, FrameParams, DeflationIndex, ContextModel>;

/// A trained bijective pair (forward f, inverse f⁻¹). Contextual kinds read
/// per-row keys or values from the RowContext passed alongside y; it must
/// describe the same rows as y.
class FittedTransform {
 public:
  FittedTransform(TransformKind kind, TransformParams params, std::pair<double, double> target_range);

  TransformKind kind() const noexcept { return kind_; }
  const TransformParams& params() const noexcept { return params_; }
  std::pair<double, double> training_target_range() const noexcept { return range_; }

  template <class P>
  const P& params_as() const {
    return std::get<P>(params_);
  }

  /// Throws DomainError naming the first offending index.
  std::vector<double> forward(std::span<const double> y, const RowContext& ctx = {}) const;
  std::vector<double> inverse(std::span<const double> z, const RowContext& ctx = {}) const;

  /// Inverse that never fails on values: an element outside the inverse
  /// domain is clamped to the nearer end of the training target range and
  /// counted in `clamped`. Missing-key errors still throw.
  std::vector<double> inverse_clamped(std::span<const double> z, const RowContext& ctx,
                                      std::size_t& clamped) const;

  bool operator==(const FittedTransform&) const = default;

 private:
  double forward_one(double y, std::size_t row, const RowContext& ctx) const;
  double inverse_one(double z, std::size_t row, const RowContext& ctx) const;

  TransformKind kind_;
  TransformParams params_;
  std::pair<double, double> range_;
};

/// Options for fitting kinds that need more than the dataset.
struct FitOptions {
  /// Deflation index loaded from a (time_key, index_value) CSV; when absent
  /// the dataset's price_index role column is used.
  std::optional<DeflationIndex> deflation_index;
  /// Base period t₀; defaults to the latest time key.
  std::optional<std::string> base_time;
};

/// Fits any kind on a dataset's target, pulling role columns as needed.
/// Throws ConfigError when a required role is missing.
FittedTransform fit_transform(TransformKind kind, const Dataset& data, const FitOptions& options = {});

std::pair<double, double> target_range(std::span<const double> y);

}  // namespace ytx
