// Licensed under the Apache License 2.0 (see LICENSE file).

#include "ytx/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>

#include "ytx/error.hpp"
#include "ytx/transforms_ctx.hpp"
#include "ytx/transforms_dist.hpp"

namespace ytx::diag {

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double r_squared(std::span<const double> y, std::span<const double> residuals) {
  const double m = mean_of(y);
  double sst = 0.0;
  double ssr = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sst += (y[i] - m) * (y[i] - m);
    ssr += residuals[i] * residuals[i];
  }
  if (!(sst > 0.0)) return 0.0;
  return std::clamp(1.0 - ssr / sst, 0.0, 1.0);
}

}  // namespace

void set_threshold(Thresholds& t, std::string_view key, double value) {
  if (key == "subjective_p") t.subjective_p = value;
  else if (key == "frame_r") t.frame_r = value;
  else if (key == "trend_rho") t.trend_rho = value;
  else if (key == "context_r2") t.context_r2 = value;
  else if (key == "skew") t.skew = value;
  else if (key == "gap") t.gap = value;
  else if (key == "hetero_p") t.hetero_p = value;
  else throw ConfigError("unknown threshold '" + std::string(key) + "'");
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double gap_score(std::span<const double> y) {
  std::vector<double> s(y.begin(), y.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.size() < 2) throw DataError("gap score undefined for a constant target");
  double largest = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) largest = std::max(largest, s[i] - s[i - 1]);
  return largest / (s.back() - s.front());
}

AnovaResult one_way_anova(std::span<const double> y, std::span<const std::string> groups) {
  if (y.size() != groups.size()) throw DataError("subject column length differs from the target");
  std::map<std::string, std::vector<double>> by_group;
  for (std::size_t i = 0; i < y.size(); ++i) by_group[groups[i]].push_back(y[i]);
  std::erase_if(by_group, [](const auto& kv) { return kv.second.size() < 2; });
  if (by_group.size() < 2) throw DataError("subjective test needs at least two subjects with two or more samples");

  std::size_t n = 0;
  double total = 0.0;
  for (const auto& [k, v] : by_group) {
    n += v.size();
    total += std::accumulate(v.begin(), v.end(), 0.0);
  }
  const double grand = total / static_cast<double>(n);
  double ssb = 0.0, ssw = 0.0;
  for (const auto& [k, v] : by_group) {
    const double m = mean_of(v);
    ssb += static_cast<double>(v.size()) * (m - grand) * (m - grand);
    for (double x : v) ssw += (x - m) * (x - m);
  }

  AnovaResult r;
  r.df_between = by_group.size() - 1;
  r.df_within = n - by_group.size();
  // Relative cutoff so rounding noise in equal group means reads as zero.
  const double scale = std::max(ssb + ssw, std::abs(grand) * std::abs(grand) * static_cast<double>(n));
  if (ssb <= 1e-14 * scale) {
    r.f = 0.0;
    r.p_value = 1.0;
  } else if (!(ssw > 0.0) || r.df_within == 0) {
    r.f = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
  } else {
    r.f = (ssb / static_cast<double>(r.df_between)) / (ssw / static_cast<double>(r.df_within));
    boost::math::fisher_f_distribution<double> dist(static_cast<double>(r.df_between),
                                                    static_cast<double>(r.df_within));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.f));
  }
  return r;
}

BreuschPaganResult breusch_pagan(std::span<const double> y, const Matrix& features) {
  BreuschPaganResult r;
  if (features.cols() == 0) return r;
  auto fit = linalg::least_squares(features, y);
  std::vector<double> e2(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) e2[i] = fit.residuals[i] * fit.residuals[i];
  auto aux = linalg::least_squares(features, e2);
  r.df = aux.rank > 0 ? aux.rank - 1 : 0;
  if (r.df == 0) return r;
  r.lm = static_cast<double>(y.size()) * r_squared(e2, aux.residuals);
  boost::math::chi_squared_distribution<double> dist(static_cast<double>(r.df));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.lm));
  return r;
}

Verdict detect_subjective(std::span<const double> y, std::span<const std::string> subject, const Thresholds& t) {
  auto a = one_way_anova(y, subject);
  Verdict v;
  v.statistic = a.f;
  v.p_value = a.p_value;
  v.flagged = a.p_value < t.subjective_p;
  return v;
}

Verdict detect_frame(std::span<const double> y, std::span<const double> frame, const Thresholds& t) {
  if (frame.size() != y.size()) throw DataError("frame column length differs from the target");
  Verdict v;
  v.statistic = pearson(frame, y);
  v.flagged = std::abs(v.statistic) > t.frame_r;
  return v;
}

Verdict detect_trend(std::span<const double> y, std::span<const std::string> time, const Thresholds& t) {
  if (time.size() != y.size()) throw DataError("time column length differs from the target");
  const bool numeric = ctx::all_numeric_keys(time);
  std::vector<std::size_t> order(time.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return ctx::time_key_less(time[a], time[b], numeric); });
  std::vector<double> time_rank(time.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) time_rank[order[pos]] = static_cast<double>(pos + 1);

  Verdict v;
  v.statistic = pearson(average_ranks(y), time_rank);
  v.flagged = std::abs(v.statistic) > t.trend_rho;
  return v;
}

Verdict detect_context(std::span<const double> y, const Matrix& context, const Thresholds& t) {
  if (context.rows() != y.size()) throw DataError("context matrix rows differ from the target");
  Verdict v;
  auto fit = linalg::least_squares(context, y);
  if (!fit.full_rank) {
    v.warning = "collinear context columns; R² not computed";
    return v;
  }
  v.statistic = r_squared(y, fit.residuals);
  v.flagged = v.statistic > t.context_r2;
  return v;
}

DistributionVerdict detect_distribution(std::span<const double> y, const Matrix& features, const Thresholds& t) {
  if (y.size() < 20) throw DataError("distribution diagnostics need at least 20 rows");
  DistributionVerdict v;
  v.skewness = dist::skewness(y);
  v.skewed = std::abs(v.skewness) > t.skew;
  v.gap_score = gap_score(y);
  v.gap = v.gap_score > t.gap;
  if (features.cols() == 0) {
    v.warning = "no features; heteroscedasticity not tested";
  } else {
    auto bp = breusch_pagan(y, features);
    v.hetero_statistic = bp.lm;
    v.hetero_p_value = bp.p_value;
    v.heteroscedastic = bp.df > 0 && bp.p_value < t.hetero_p;
  }
  v.flagged = v.skewed || v.gap || v.heteroscedastic;
  return v;
}

std::vector<Recommendation> recommend(const DiagnosticReport& report) {
  std::vector<Recommendation> out;
  auto add = [&](std::initializer_list<TransformKind> kinds, const char* reason) {
    for (auto k : kinds) {
      if (std::none_of(out.begin(), out.end(), [k](const auto& r) { return r.kind == k; })) {
        out.push_back({k, reason});
      }
    }
  };
  using K = TransformKind;
  if (report.subjective && report.subjective->flagged) add({K::subject_center, K::trial_minmax}, "subjective target");
  if (report.frame && report.frame->flagged) add({K::frame}, "frame dependency");
  if (report.trend && report.trend->flagged) add({K::deflate}, "trend dependency");
  if (report.context && report.context->flagged) add({K::expectation_norm, K::regression_norm}, "contextual dependency");
  const auto& d = report.distribution;
  if (d.skewed) add({K::log_offset, K::yeo_johnson, K::quantile_normal}, "skewed target");
  if (d.gap) add({K::quantile_normal, K::quantile_uniform}, "gap in target values");
  if (d.heteroscedastic) add({K::log_offset, K::sqrt, K::box_cox}, "heteroscedastic residuals");
  return out;
}

DiagnosticReport diagnose(const Dataset& data, const Thresholds& t) {
  DiagnosticReport report;
  report.thresholds = t;
  const auto& y = data.target;
  if (!data.subject_keys.empty()) report.subjective = detect_subjective(y, data.subject_keys, t);
  if (!data.frame.empty()) report.frame = detect_frame(y, data.frame, t);
  if (!data.time_keys.empty()) report.trend = detect_trend(y, data.time_keys, t);
  if (!data.context.empty()) report.context = detect_context(y, data.context, t);
  report.distribution = detect_distribution(y, data.features, t);
  report.recommendations = recommend(report);
  return report;
}

}  // namespace ytx::diag
