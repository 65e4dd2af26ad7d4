// Licensed under the Apache License 2.0 (see LICENSE file).

#include "ytx/serialize.hpp"

#include "ytx/error.hpp"

namespace ytx::io {

namespace {

Json optional_string(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

std::optional<std::string> read_optional_string(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_string()) throw ConfigError(std::string("roles: '") + key + "' must be a string or null");
  return j.at(key).get<std::string>();
}

std::vector<std::string> read_string_list(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return {};
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(std::string("roles: '") + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError(std::string("roles: '") + key + "' entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

Json verdict_json(const diag::Verdict& v) {
  Json j{{"flagged", v.flagged}, {"statistic", v.statistic}};
  if (v.p_value) j["p_value"] = *v.p_value;
  if (v.warning) j["warning"] = *v.warning;
  return j;
}

diag::Verdict verdict_from(const Json& j) {
  diag::Verdict v;
  v.flagged = j.at("flagged").get<bool>();
  v.statistic = j.at("statistic").is_null() ? std::numeric_limits<double>::infinity() : j.at("statistic").get<double>();
  if (j.contains("p_value")) v.p_value = j.at("p_value").get<double>();
  if (j.contains("warning")) v.warning = j.at("warning").get<std::string>();
  return v;
}

Json summary_json(const eval::MetricSummary& s) {
  return Json{{"mean", s.mean}, {"std", s.std}, {"folds", s.folds}};
}

eval::MetricSummary summary_from(const Json& j) {
  eval::MetricSummary s;
  s.mean = j.at("mean").get<double>();
  s.std = j.at("std").get<double>();
  s.folds = j.at("folds").get<std::vector<double>>();
  return s;
}

}  // namespace

// -------------------------------------------------------------------- roles

Json to_json(const ColumnRoles& roles) {
  Json j{{"target", roles.target},
         {"subject", optional_string(roles.subject)},
         {"time", optional_string(roles.time)},
         {"frame", optional_string(roles.frame)},
         {"trial", optional_string(roles.trial)},
         {"context", roles.context},
         {"price_index", optional_string(roles.price_index)}};
  if (!roles.ignore.empty()) j["ignore"] = roles.ignore;
  return j;
}

ColumnRoles roles_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("roles must be a JSON object");
  static const char* known[] = {"target", "subject", "time", "frame", "trial", "context", "price_index", "ignore"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ConfigError("roles: unknown key '" + key + "'");
    }
  }
  ColumnRoles r;
  auto target = read_optional_string(j, "target");
  if (!target || target->empty()) throw ConfigError("roles: 'target' is required");
  r.target = *target;
  r.subject = read_optional_string(j, "subject");
  r.time = read_optional_string(j, "time");
  r.frame = read_optional_string(j, "frame");
  r.trial = read_optional_string(j, "trial");
  r.price_index = read_optional_string(j, "price_index");
  r.context = read_string_list(j, "context");
  r.ignore = read_string_list(j, "ignore");
  return r;
}

ColumnRoles parse_roles(std::string_view text) {
  Json j = guarded("roles", [&] { return Json::parse(text); });
  return roles_from_json(j);
}

// --------------------------------------------------------------- transforms

Json to_json(const FittedTransform& t) {
  Json params = Json::object();
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LogOffsetParams>) {
          params["offset"] = p.offset;
        } else if constexpr (std::is_same_v<P, PowerParams>) {
          params["lambda"] = p.lambda;
          params["shift"] = p.shift;
          params["log_likelihood"] = p.log_likelihood;
        } else if constexpr (std::is_same_v<P, QuantileMap>) {
          params["reference"] = p.reference == QuantileReference::normal ? "normal" : "uniform";
          params["clip_epsilon"] = p.clip_epsilon;
          params["knots"] = p.knots;
        } else if constexpr (std::is_same_v<P, SubjectStats>) {
          params["global_mean"] = p.global_mean;
          Json subjects = Json::object();
          for (const auto& [k, m] : p.mean) subjects[k] = Json{{"mean", m}, {"count", p.count.at(k)}};
          params["subjects"] = subjects;
        } else if constexpr (std::is_same_v<P, TrialRange>) {
          Json trials = Json::object();
          for (const auto& [k, r] : p.range) trials[k] = Json::array({r.first, r.second});
          params["trials"] = trials;
        } else if constexpr (std::is_same_v<P, DeflationIndex>) {
          params["base_time"] = p.base_time;
          params["series"] = p.series;
        } else if constexpr (std::is_same_v<P, ContextModel>) {
          params["intercept"] = p.intercept;
          params["coefficients"] = p.coefficients;
          if (p.mode == ContextMode::expectation_norm) {
            params["sigma_intercept"] = p.sigma_intercept;
            params["sigma_coefficients"] = p.sigma_coefficients;
            params["sigma_floor"] = p.sigma_floor;
          } else {
            params["denom_floor"] = p.denom_floor;
          }
        }
      },
      t.params());
  auto [lo, hi] = t.training_target_range();
  return Json{{"schema", kTransformSchema},
              {"kind", std::string(to_string(t.kind()))},
              {"training_target_range", {lo, hi}},
              {"params", params}};
}

FittedTransform transform_from_json(const Json& j) {
  return guarded("transform", [&] {
    if (j.value("schema", "") != kTransformSchema) throw ConfigError("transform JSON: unexpected schema");
    auto kind = parse_transform_kind(j.at("kind").get<std::string>());
    if (!kind) throw ConfigError("transform JSON: unknown kind '" + j.at("kind").get<std::string>() + "'");
    const auto& range = j.at("training_target_range");
    std::pair<double, double> r{range.at(0).get<double>(), range.at(1).get<double>()};
    const auto& p = j.at("params");
    TransformParams params;
    switch (*kind) {
      case TransformKind::identity: params = IdentityParams{}; break;
      case TransformKind::sqrt: params = SqrtParams{}; break;
      case TransformKind::frame: params = FrameParams{}; break;
      case TransformKind::log_offset: params = LogOffsetParams{p.at("offset").get<double>()}; break;
      case TransformKind::box_cox:
      case TransformKind::yeo_johnson: {
        PowerParams pp;
        pp.lambda = p.at("lambda").get<double>();
        pp.shift = p.at("shift").get<double>();
        pp.log_likelihood = p.at("log_likelihood").is_null() ? 0.0 : p.at("log_likelihood").get<double>();
        params = pp;
        break;
      }
      case TransformKind::quantile_normal:
      case TransformKind::quantile_uniform: {
        QuantileMap q;
        q.reference = p.at("reference").get<std::string>() == "uniform" ? QuantileReference::uniform
                                                                        : QuantileReference::normal;
        q.clip_epsilon = p.at("clip_epsilon").get<double>();
        q.knots = p.at("knots").get<std::vector<double>>();
        if (q.knots.size() < 2) throw ConfigError("transform JSON: quantile map needs at least two knots");
        params = std::move(q);
        break;
      }
      case TransformKind::subject_center: {
        SubjectStats s;
        s.global_mean = p.at("global_mean").get<double>();
        for (const auto& [k, v] : p.at("subjects").items()) {
          s.mean[k] = v.at("mean").get<double>();
          s.count[k] = v.at("count").get<std::size_t>();
        }
        params = std::move(s);
        break;
      }
      case TransformKind::trial_minmax: {
        TrialRange tr;
        for (const auto& [k, v] : p.at("trials").items()) tr.range[k] = {v.at(0).get<double>(), v.at(1).get<double>()};
        params = std::move(tr);
        break;
      }
      case TransformKind::deflate: {
        DeflationIndex d;
        d.base_time = p.at("base_time").get<std::string>();
        d.series = p.at("series").get<std::map<std::string, double>>();
        params = std::move(d);
        break;
      }
      case TransformKind::expectation_norm:
      case TransformKind::regression_norm: {
        ContextModel m;
        m.mode = *kind == TransformKind::expectation_norm ? ContextMode::expectation_norm
                                                          : ContextMode::regression_norm;
        m.intercept = p.at("intercept").get<double>();
        m.coefficients = p.at("coefficients").get<std::vector<double>>();
        if (m.mode == ContextMode::expectation_norm) {
          m.sigma_intercept = p.at("sigma_intercept").get<double>();
          m.sigma_coefficients = p.at("sigma_coefficients").get<std::vector<double>>();
          m.sigma_floor = p.at("sigma_floor").get<double>();
        } else {
          m.denom_floor = p.at("denom_floor").get<double>();
        }
        params = std::move(m);
        break;
      }
    }
    return FittedTransform(*kind, std::move(params), r);
  });
}

// -------------------------------------------------------------- diagnostics

Json to_json(const diag::Thresholds& t) {
  return Json{{"subjective_p", t.subjective_p}, {"frame_r", t.frame_r}, {"trend_rho", t.trend_rho},
              {"context_r2", t.context_r2},     {"skew", t.skew},       {"gap", t.gap},
              {"hetero_p", t.hetero_p}};
}

diag::Thresholds thresholds_from_json(const Json& j) {
  diag::Thresholds t;
  if (j.is_null()) return t;
  if (!j.is_object()) throw ConfigError("thresholds must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw ConfigError("threshold '" + key + "' must be a number");
    diag::set_threshold(t, key, value.get<double>());
  }
  return t;
}

Json to_json(const diag::DiagnosticReport& r) {
  Json j{{"schema", kDiagnosticsSchema}};
  if (r.subjective) j["subjective"] = verdict_json(*r.subjective);
  if (r.frame) j["frame"] = verdict_json(*r.frame);
  if (r.trend) j["trend"] = verdict_json(*r.trend);
  if (r.context) j["context"] = verdict_json(*r.context);
  const auto& d = r.distribution;
  Json dist{{"flagged", d.flagged},
            {"skewness", d.skewness},
            {"skewed", d.skewed},
            {"gap_score", d.gap_score},
            {"gap", d.gap},
            {"heteroscedasticity",
             {{"statistic", d.hetero_statistic}, {"p_value", d.hetero_p_value}, {"flagged", d.heteroscedastic}}}};
  if (d.warning) dist["warning"] = *d.warning;
  j["distribution"] = dist;
  Json recs = Json::array();
  for (const auto& rec : r.recommendations) {
    recs.push_back({{"transform", std::string(to_string(rec.kind))}, {"reason", rec.reason}});
  }
  j["recommendations"] = recs;
  j["thresholds"] = to_json(r.thresholds);
  return j;
}

diag::DiagnosticReport diagnostics_from_json(const Json& j) {
  return guarded("diagnostics", [&] {
    if (j.value("schema", "") != kDiagnosticsSchema) throw ConfigError("diagnostics JSON: unexpected schema");
    diag::DiagnosticReport r;
    if (j.contains("subjective")) r.subjective = verdict_from(j.at("subjective"));
    if (j.contains("frame")) r.frame = verdict_from(j.at("frame"));
    if (j.contains("trend")) r.trend = verdict_from(j.at("trend"));
    if (j.contains("context")) r.context = verdict_from(j.at("context"));
    const auto& d = j.at("distribution");
    r.distribution.flagged = d.at("flagged").get<bool>();
    r.distribution.skewness = d.at("skewness").get<double>();
    r.distribution.skewed = d.at("skewed").get<bool>();
    r.distribution.gap_score = d.at("gap_score").get<double>();
    r.distribution.gap = d.at("gap").get<bool>();
    const auto& h = d.at("heteroscedasticity");
    r.distribution.hetero_statistic = h.at("statistic").get<double>();
    r.distribution.hetero_p_value = h.at("p_value").get<double>();
    r.distribution.heteroscedastic = h.at("flagged").get<bool>();
    if (d.contains("warning")) r.distribution.warning = d.at("warning").get<std::string>();
    for (const auto& rec : j.at("recommendations")) {
      auto kind = parse_transform_kind(rec.at("transform").get<std::string>());
      if (!kind) throw ConfigError("diagnostics JSON: unknown transform in recommendations");
      r.recommendations.push_back({*kind, rec.at("reason").get<std::string>()});
    }
    if (j.contains("thresholds")) r.thresholds = thresholds_from_json(j.at("thresholds"));
    return r;
  });
}

// ---------------------------------------------------------------- benchmark

Json to_json(const eval::BenchmarkReport& r) {
  Json models = Json::array();
  for (const auto& m : r.models) models.push_back({{"model", std::string(eval::to_string(m.kind))}, {"alpha", m.alpha}});
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    Json cj{{"model", c.model}, {"alpha", c.alpha}, {"transform", c.transform}};
    if (c.error) {
      cj["error"] = *c.error;
    } else {
      cj["rse"] = summary_json(c.rse);
      cj["smape"] = summary_json(c.smape);
      cj["clamped"] = c.clamped;
      cj["nonconverged_folds"] = c.nonconverged_folds;
    }
    cells.push_back(cj);
  }
  return Json{{"schema", kBenchmarkSchema},
              {"dataset", r.dataset},
              {"rows", r.rows},
              {"features", r.features},
              {"seed", r.seed},
              {"protocol", "5x2cv"},
              {"models", models},
              {"transforms", r.transforms},
              {"cells", cells},
              {"warnings", r.warnings}};
}

eval::BenchmarkReport benchmark_from_json(const Json& j) {
  return guarded("benchmark", [&] {
    if (j.value("schema", "") != kBenchmarkSchema) throw ConfigError("benchmark JSON: unexpected schema");
    eval::BenchmarkReport r;
    r.dataset = j.at("dataset").get<std::string>();
    r.rows = j.at("rows").get<std::size_t>();
    r.features = j.at("features").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& m : j.at("models")) {
      auto kind = eval::parse_model_kind(m.at("model").get<std::string>());
      if (!kind) throw ConfigError("benchmark JSON: unknown model");
      r.models.push_back({*kind, m.at("alpha").get<double>()});
    }
    r.transforms = j.at("transforms").get<std::vector<std::string>>();
    for (const auto& cj : j.at("cells")) {
      eval::BenchmarkCell c;
      c.model = cj.at("model").get<std::string>();
      c.alpha = cj.at("alpha").get<double>();
      c.transform = cj.at("transform").get<std::string>();
      if (cj.contains("error")) {
        c.error = cj.at("error").get<std::string>();
      } else {
        c.rse = summary_from(cj.at("rse"));
        c.smape = summary_from(cj.at("smape"));
        c.clamped = cj.at("clamped").get<std::size_t>();
        c.nonconverged_folds = cj.at("nonconverged_folds").get<std::size_t>();
      }
      r.cells.push_back(std::move(c));
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  });
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ytx::io
