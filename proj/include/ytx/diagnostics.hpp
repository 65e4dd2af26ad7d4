// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ytx/dataset.hpp"
#include "ytx/transform.hpp"

namespace ytx::diag {

/// Decision thresholds for the detectors. Keys accepted by set_threshold are
/// the member names.
struct Thresholds {
  double subjective_p = 0.05;  // ANOVA p below this flags subject dependence
  double frame_r = 0.3;        // |Pearson r| above
  double trend_rho = 0.3;      // |Spearman ρ| above
  double context_r2 = 0.25;    // R² above
  double skew = 0.4;           // |γ| above
  double gap = 0.1;            // gap score above
  double hetero_p = 0.05;      // Breusch-Pagan p below

  bool operator==(const Thresholds&) const = default;
};

/// Throws ConfigError for an unknown key.
void set_threshold(Thresholds& t, std::string_view key, double value);

struct Verdict {
  bool flagged = false;
  double statistic = 0.0;
  std::optional<double> p_value;
  std::optional<std::string> warning;

  bool operator==(const Verdict&) const = default;
};

struct DistributionVerdict {
  bool flagged = false;
  double skewness = 0.0;
  bool skewed = false;
  double gap_score = 0.0;
  bool gap = false;
  double hetero_statistic = 0.0;
  double hetero_p_value = 1.0;
  bool heteroscedastic = false;
  std::optional<std::string> warning;

  bool operator==(const DistributionVerdict&) const = default;
};

struct Recommendation {
  TransformKind kind;
  std::string reason;

  bool operator==(const Recommendation&) const = default;
};

/// Verdicts are present iff their role columns exist; distribution always is.
struct DiagnosticReport {
  std::optional<Verdict> subjective;
  std::optional<Verdict> frame;
  std::optional<Verdict> trend;
  std::optional<Verdict> context;
  DistributionVerdict distribution;
  std::vector<Recommendation> recommendations;
  Thresholds thresholds;

  bool operator==(const DiagnosticReport&) const = default;
};

struct AnovaResult {
  double f = 0.0;
  double p_value = 1.0;
  std::size_t df_between = 0;
  std::size_t df_within = 0;
};

/// One-way ANOVA of y across key groups. Groups with a single sample are
/// left out; fewer than two remaining groups is a DataError.
AnovaResult one_way_anova(std::span<const double> y, std::span<const std::string> groups);

struct BreuschPaganResult {
  double lm = 0.0;
  double p_value = 1.0;
  std::size_t df = 0;
};

/// Studentized Breusch-Pagan test: n·R² of the squared OLS residuals of y on
/// [1, X] regressed on [1, X], against χ² with rank−1 degrees of freedom.
BreuschPaganResult breusch_pagan(std::span<const double> y, const Matrix& features);

double pearson(std::span<const double> x, std::span<const double> y);
/// Ranks starting at 1; ties share their average rank.
std::vector<double> average_ranks(std::span<const double> v);
/// Largest gap between consecutive distinct sorted values over the range.
double gap_score(std::span<const double> y);

Verdict detect_subjective(std::span<const double> y, std::span<const std::string> subject,
                          const Thresholds& t = {});
Verdict detect_frame(std::span<const double> y, std::span<const double> frame, const Thresholds& t = {});
Verdict detect_trend(std::span<const double> y, std::span<const std::string> time, const Thresholds& t = {});
Verdict detect_context(std::span<const double> y, const Matrix& context, const Thresholds& t = {});
DistributionVerdict detect_distribution(std::span<const double> y, const Matrix& features,
                                        const Thresholds& t = {});

/// Transform kinds suggested by the flagged verdicts, first occurrence kept.
std::vector<Recommendation> recommend(const DiagnosticReport& report);

DiagnosticReport diagnose(const Dataset& data, const Thresholds& t = {});

}  // namespace ytx::diag
