// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "ytx/transform.hpp"

namespace ytx::ctx {

/// y − ȳᵢ per subject. Unseen subjects at apply time fall back to the global
/// mean.
FittedTransform fit_subject_center(std::span<const double> y, std::span<const std::string> subject);

/// Per-trial min-max scaling to [0, 1]. Throws DataError naming a trial whose
/// targets are all equal.
FittedTransform fit_trial_minmax(std::span<const double> y, std::span<const std::string> trial);

/// y / R for a strictly positive frame of reference R per row.
FittedTransform fit_frame_normalize(std::span<const double> y, std::span<const double> frame);

/// y · z_{t₀} / z_t with an exact time-key lookup in the index series.
FittedTransform fit_deflate(std::span<const double> y, std::span<const std::string> time,
                            const DeflationIndex& index);

/// (y − Ê[y|φ]) / Ê[σ|φ] with both conditional moments fitted by least squares.
FittedTransform fit_expectation_normalize(std::span<const double> y, const Matrix& context);

/// y / (β₀ + Σ βⱼφⱼ) with β from a least-squares fit of y on φ.
FittedTransform fit_regression_normalize(std::span<const double> y, const Matrix& context);

/// Index series from parallel key/value columns. A key repeated with a
/// different value is an error. base_time defaults to the latest key.
DeflationIndex make_deflation_index(std::span<const std::string> time, std::span<const double> values,
                                    std::optional<std::string> base_time = std::nullopt);

/// Loads a two-column (time_key, index_value) CSV with a header row.
DeflationIndex load_deflation_index(const std::filesystem::path& path,
                                    std::optional<std::string> base_time = std::nullopt);

/// Sort order for time keys: numeric when every key parses as a number,
/// lexicographic otherwise.
bool time_key_less(const std::string& a, const std::string& b, bool numeric);
bool all_numeric_keys(std::span<const std::string> keys);

// Row-wise maps used by FittedTransform.
double context_mean(const ContextModel& m, std::span<const double> phi);
double context_sigma(const ContextModel& m, std::span<const double> phi);
/// Regression-normalization denominator, clamped away from zero.
double context_denominator(const ContextModel& m, std::span<const double> phi, bool* clamped = nullptr);

}  // namespace ytx::ctx
