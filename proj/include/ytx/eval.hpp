// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ytx/dataset.hpp"
#include "ytx/matrix.hpp"
#include "ytx/transform.hpp"

namespace ytx::eval {

// ------------------------------------------------------------------ metrics

/// Σ(y−ŷ)² / Σ(y−ȳ)². Throws DataError for a constant `actual`.
double rse(std::span<const double> actual, std::span<const double> predicted);

/// Mean of |y−ŷ| / ((|y|+|ŷ|)/2), in percent. A pair with both values zero
/// contributes 0.
double smape(std::span<const double> actual, std::span<const double> predicted);

// ------------------------------------------------------------ linear models

/// gbtr and svr are reserved identifiers for externally produced results;
/// this library cannot fit them.
enum class ModelKind { ridge, lasso, gbtr, svr };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);
/// 1.0 for ridge, 0.01 for lasso.
double default_alpha(ModelKind kind);

class LinearModel {
 public:
  ModelKind kind = ModelKind::ridge;
  double alpha = 1.0;
  std::vector<double> coefficients;  // on standardized features
  double intercept = 0.0;            // mean of the training target
  std::vector<double> feature_means;
  std::vector<double> feature_stds;  // 1 for zero-variance features
  bool converged = true;
  std::size_t sweeps = 0;
  /// Lasso objective after each sweep, when requested.
  std::vector<double> objective_history;

  double predict_one(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& x) const;
  /// Coefficients mapped back to raw feature units.
  std::vector<double> raw_coefficients() const;
  double raw_intercept() const;

  bool operator==(const LinearModel&) const = default;
};

/// Ridge on standardized features with an unpenalized intercept: solves
/// (ZᵀZ + αI)β = Zᵀ(y − ȳ). Throws ConfigError when the system is singular.
LinearModel fit_ridge(const Matrix& x, std::span<const double> y, double alpha);

struct LassoOptions {
  double tolerance = 1e-7;
  std::size_t max_sweeps = 10000;
  bool record_objective = false;
};

/// Cyclic coordinate descent on (1/2n)‖y − ȳ − Zβ‖² + α‖β‖₁ over standardized
/// features Z. Non-convergence sets converged = false.
LinearModel fit_lasso(const Matrix& x, std::span<const double> y, double alpha, const LassoOptions& options = {});

/// Penalized lasso objective of a coefficient vector on standardized data.
double lasso_objective(const Matrix& z, std::span<const double> centered_y, std::span<const double> beta,
                       double alpha);

struct Standardization {
  std::vector<double> means;
  std::vector<double> stds;
  Matrix z;
};

/// Column means and population standard deviations; zero-variance columns get
/// std 1 and are reported via `constant`.
Standardization standardize(const Matrix& x, std::vector<bool>* constant = nullptr);

// -------------------------------------------------------------------- folds

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  bool operator==(const Fold&) const = default;
};

/// 5 repeats × 2 folds. Repeat r shuffles [0, n) with a generator seeded from
/// splitmix64(seed ^ r); the first half (ceil(n/2) indices) trains fold 2r and
/// tests fold 2r+1.
struct FoldPlan {
  std::uint64_t seed = 0;
  std::vector<Fold> folds;
  bool operator==(const FoldPlan&) const = default;
};

inline constexpr std::size_t kRepeats = 5;

FoldPlan make_fold_plan(std::size_t n, std::uint64_t seed);
std::uint64_t splitmix64(std::uint64_t x);

// ---------------------------------------------------------------- benchmark

struct ModelSpec {
  ModelKind kind = ModelKind::ridge;
  double alpha = 1.0;
  bool operator==(const ModelSpec&) const = default;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation over folds
  std::vector<double> folds;
  bool operator==(const MetricSummary&) const = default;
};

MetricSummary summarize(std::vector<double> per_fold);

struct BenchmarkCell {
  std::string model;
  double alpha = 0.0;
  std::string transform;
  MetricSummary rse;
  MetricSummary smape;
  std::size_t clamped = 0;
  std::size_t nonconverged_folds = 0;
  std::optional<std::string> error;
  bool operator==(const BenchmarkCell&) const = default;
};

struct BenchmarkReport {
  std::string dataset;
  std::size_t rows = 0;
  std::size_t features = 0;
  std::uint64_t seed = 0;
  std::vector<ModelSpec> models;
  std::vector<std::string> transforms;  // baseline "identity" first
  std::vector<BenchmarkCell> cells;     // model-major, transform order within
  std::vector<std::string> warnings;

  const BenchmarkCell* find(std::string_view model, std::string_view transform) const;
  bool operator==(const BenchmarkReport&) const = default;
};

struct BenchmarkOptions {
  std::string dataset_name = "dataset";
  std::size_t threads = 1;
  FitOptions fit;
};

/// Everything trained on one fold's training rows.
struct FoldArtifacts {
  FittedTransform transform;
  LinearModel model;
  std::vector<double> predictions;  // inverse-transformed, test rows
  std::size_t clamped = 0;
};

FoldArtifacts evaluate_fold(const Dataset& data, const Fold& fold, const ModelSpec& model, TransformKind kind,
                            const FitOptions& fit = {});

/// Runs every (model, transform) pair over the 5x2 fold plan. The identity
/// baseline is always evaluated and listed first. Results do not depend on
/// the thread count.
BenchmarkReport run_benchmark(const Dataset& data, std::span<const ModelSpec> models,
                              std::span<const TransformKind> transforms, std::uint64_t seed,
                              const BenchmarkOptions& options = {});

/// Markdown tables (one per model and metric): rows = datasets, columns =
/// transforms, cells "mean ± std".
std::string to_markdown(std::span<const BenchmarkReport> reports);

/// Short column label: Base, QN, QU, YJ, Ln, or the kind name.
std::string column_label(std::string_view transform);

}  // namespace ytx::eval
