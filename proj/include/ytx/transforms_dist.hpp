// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <span>

#include "ytx/transform.hpp"

namespace ytx::dist {

/// Bounds of the λ search for the power transforms.
inline constexpr double kLambdaMin = -5.0;
inline constexpr double kLambdaMax = 5.0;

/// ln(y + offset) with offset = max(maxᵢ⌈−yᵢ⌉, 1).
FittedTransform fit_log_offset(std::span<const double> y);
FittedTransform fit_sqrt(std::span<const double> y);
FittedTransform fit_box_cox(std::span<const double> y);
FittedTransform fit_yeo_johnson(std::span<const double> y);
FittedTransform fit_quantile(std::span<const double> y, QuantileReference reference);

double log_offset_of(std::span<const double> y);

// Scalar maps. Each inverse throws DomainError outside its domain.
double box_cox_forward(double y, const PowerParams& p);
double box_cox_inverse(double z, const PowerParams& p);
double yeo_johnson_forward(double y, double lambda);
double yeo_johnson_inverse(double z, double lambda);
double quantile_forward(double y, const QuantileMap& map);
double quantile_inverse(double z, const QuantileMap& map);

/// Profile log-likelihoods maximized by the λ search (Gaussian model on the
/// transformed values, variance at its MLE).
double box_cox_log_likelihood(std::span<const double> shifted_y, double lambda);
double yeo_johnson_log_likelihood(std::span<const double> y, double lambda);

/// Box-Cox positivity shift: 0 when min(y) already clears the margin.
double box_cox_shift(std::span<const double> y);

/// Fisher-Pearson coefficient of skewness g₁ = m₃ / m₂^{3/2} (biased form).
double skewness(std::span<const double> y);

/// Standard normal CDF and its inverse. normal_ppf throws DomainError for p
/// outside (0, 1).
double normal_cdf(double x);
double normal_ppf(double p);

}  // namespace ytx::dist
