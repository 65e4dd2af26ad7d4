// Licensed under the Apache License 2.0 (see LICENSE file).

#include "ytx/ytx.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>

#include "ytx/csv.hpp"
#include "ytx/dataset.hpp"
#include "ytx/diagnostics.hpp"
#include "ytx/error.hpp"
#include "ytx/eval.hpp"
#include "ytx/serialize.hpp"
#include "ytx/transform.hpp"
#include "ytx/transforms_ctx.hpp"

struct ytx_dataset {
  ytx::csv::Table table;
  ytx::Dataset data;
};

struct ytx_transform {
  ytx::FittedTransform t;
};

namespace {

using ytx::io::Json;

thread_local std::string g_last_error;

ytx_status fail(ytx_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
ytx_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return YTX_OK;
  } catch (const ytx::Error& e) {
    return fail(static_cast<ytx_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(YTX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(YTX_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Json parse_json(const char* text, const char* what) {
  if (!text || !*text) return Json(nullptr);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ytx::ConfigError(std::string("invalid ") + what + " JSON: " + e.what());
  }
}

ytx::FitOptions fit_options(const Json& j) {
  ytx::FitOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) throw ytx::ConfigError("transform options must be a JSON object");
  if (j.contains("base_time") && !j.at("base_time").is_null()) o.base_time = j.at("base_time").get<std::string>();
  if (j.contains("deflation_index") && !j.at("deflation_index").is_null()) {
    o.deflation_index = ytx::ctx::load_deflation_index(j.at("deflation_index").get<std::string>(), o.base_time);
  }
  return o;
}

ytx::TransformKind transform_kind(const std::string& name) {
  auto kind = ytx::parse_transform_kind(name);
  if (!kind) throw ytx::ConfigError("unknown transform '" + name + "'");
  return *kind;
}

std::vector<ytx::eval::ModelSpec> model_specs(const Json& config) {
  std::optional<double> alpha;
  if (config.contains("alpha") && !config.at("alpha").is_null()) alpha = config.at("alpha").get<double>();
  std::vector<ytx::eval::ModelSpec> specs;
  const Json models = config.value("models", Json::array({"ridge"}));
  for (const auto& m : models) {
    std::string name = m.is_object() ? m.at("model").get<std::string>() : m.get<std::string>();
    auto kind = ytx::eval::parse_model_kind(name);
    if (!kind) throw ytx::ConfigError("unknown model '" + name + "'");
    double a = alpha.value_or(ytx::eval::default_alpha(*kind));
    if (m.is_object() && m.contains("alpha")) a = m.at("alpha").get<double>();
    if (!(a >= 0.0)) throw ytx::ConfigError("alpha must be non-negative");
    specs.push_back({*kind, a});
  }
  return specs;
}

bool role_available(ytx::TransformKind kind, const ytx::Dataset& d, const ytx::FitOptions& fit) {
  using K = ytx::TransformKind;
  switch (kind) {
    case K::subject_center: return !d.subject_keys.empty();
    case K::trial_minmax: return !d.trial_keys.empty();
    case K::frame: return !d.frame.empty();
    case K::deflate: return !d.time_keys.empty() && (fit.deflation_index || !d.price_index.empty());
    case K::expectation_norm:
    case K::regression_norm: return d.context.cols() > 0;
    default: return true;
  }
}

}  // namespace

extern "C" {

const char* ytx_version(void) { return "1.0.0"; }

const char* ytx_last_error(void) { return g_last_error.c_str(); }

void ytx_string_free(char* s) { std::free(s); }

ytx_status ytx_dataset_load_csv(const char* path, const char* roles_json, ytx_dataset** out) {
  if (!path || !out) return fail(YTX_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    auto ds = std::make_unique<ytx_dataset>();
    ds->table = ytx::csv::read(path);
    Json roles = parse_json(roles_json, "roles");
    ytx::ColumnRoles r = roles.is_null() ? ytx::default_roles(ds->table) : ytx::io::roles_from_json(roles);
    ds->data = ytx::build_dataset(ds->table, r);
    *out = ds.release();
  });
}

void ytx_dataset_free(ytx_dataset* ds) { delete ds; }

ytx_status ytx_dataset_shape(const ytx_dataset* ds, size_t* rows, size_t* features) {
  if (!ds) return fail(YTX_ERR_INVALID_ARGUMENT, "null dataset");
  if (rows) *rows = ds->data.rows();
  if (features) *features = ds->data.cols();
  return YTX_OK;
}

size_t ytx_dataset_dropped_rows(const ytx_dataset* ds) { return ds ? ds->data.dropped_rows : 0; }

ytx_status ytx_dataset_target(const ytx_dataset* ds, const double** y, size_t* n) {
  if (!ds || !y || !n) return fail(YTX_ERR_INVALID_ARGUMENT, "null argument");
  *y = ds->data.target.data();
  *n = ds->data.target.size();
  return YTX_OK;
}

ytx_status ytx_transform_fit(const ytx_dataset* ds, const char* kind, const char* options_json, ytx_transform** out) {
  if (!ds || !kind || !out) return fail(YTX_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] {
    auto k = transform_kind(kind);
    auto options = fit_options(parse_json(options_json, "transform options"));
    *out = new ytx_transform{ytx::fit_transform(k, ds->data, options)};
  });
}

void ytx_transform_free(ytx_transform* t) { delete t; }

const char* ytx_transform_kind(const ytx_transform* t) {
  return t ? ytx::to_string(t->t.kind()).data() : nullptr;
}

int ytx_transform_kind_known(const char* name) {
  return name && ytx::parse_transform_kind(name).has_value() ? 1 : 0;
}

ytx_status ytx_transform_to_json(const ytx_transform* t, char** out) {
  if (!t || !out) return fail(YTX_ERR_INVALID_ARGUMENT, "null argument");
  return guard([&] { *out = copy_string(ytx::io::dump(ytx::io::to_json(t->t))); });
}

ytx_status ytx_transform_from_json(const char* json, ytx_transform** out) {
  if (!json || !out) return fail(YTX_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guard([&] { *out = new ytx_transform{ytx::io::transform_from_json(parse_json(json, "transform"))}; });
}

static ytx_status apply(const ytx_transform* t, const ytx_dataset* ctx, const double* in, size_t n, double* out,
                        bool forward) {
  if (!t || (!in && n) || (!out && n)) return fail(YTX_ERR_INVALID_ARGUMENT, "null argument");
  if (ctx && ctx->data.rows() != n) return fail(YTX_ERR_INVALID_ARGUMENT, "context rows do not match input length");
  return guard([&] {
    ytx::RowContext rc = ctx ? ctx->data.row_context() : ytx::RowContext{};
    std::span<const double> values(in, n);
    auto result = forward ? t->t.forward(values, rc) : t->t.inverse(values, rc);
    std::copy(result.begin(), result.end(), out);
  });
}

ytx_status ytx_transform_forward(const ytx_transform* t, const ytx_dataset* ctx, const double* y, size_t n,
                                 double* out) {
  return apply(t, ctx, y, n, out, true);
}

ytx_status ytx_transform_inverse(const ytx_transform* t, const ytx_dataset* ctx, const double* z, size_t n,
                                 double* out) {
  return apply(t, ctx, z, n, out, false);
}

ytx_status ytx_transform_write_csv(const ytx_transform* t, const ytx_dataset* ds, const char* path) {
  if (!t || !ds || !path) return fail(YTX_ERR_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    const auto& data = ds->data;
    const auto z = t->t.forward(data.target, data.row_context());
    const auto& header = ds->table.header;
    const auto col = static_cast<std::size_t>(
        std::find(header.begin(), header.end(), data.roles.target) - header.begin());
    const bool keep_text = t->t.kind() == ytx::TransformKind::identity;
    ytx::csv::Table out{header, {}};
    out.rows.reserve(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
      auto row = ds->table.rows[data.source_rows[i]];
      if (!keep_text) row[col] = ytx::csv::format_number(z[i]);
      out.rows.push_back(std::move(row));
    }
    ytx::csv::write(path, out);
  });
}

ytx_status ytx_diagnose(const ytx_dataset* ds, const char* thresholds_json, char** out) {
  if (!ds || !out) return fail(YTX_ERR_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    auto thresholds = ytx::io::thresholds_from_json(parse_json(thresholds_json, "thresholds"));
    *out = copy_string(ytx::io::dump(ytx::io::to_json(ytx::diag::diagnose(ds->data, thresholds))));
  });
}

ytx_status ytx_benchmark(const ytx_dataset* ds, const char* config_json, char** out) {
  if (!ds || !out) return fail(YTX_ERR_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    Json config = parse_json(config_json, "benchmark config");
    if (config.is_null()) config = Json::object();
    if (!config.is_object()) throw ytx::ConfigError("benchmark config must be a JSON object");
    try {
      const auto models = model_specs(config);
      ytx::eval::BenchmarkOptions options;
      options.fit = fit_options(config);
      options.dataset_name = config.value("dataset_name", std::string("dataset"));
      options.threads = config.value("threads", std::size_t{1});
      const auto seed = config.value("seed", std::uint64_t{42});

      std::vector<ytx::TransformKind> kinds;
      const auto names = config.value("transforms", std::vector<std::string>{});
      for (const auto& name : names) {
        if (name != "auto") {
          kinds.push_back(transform_kind(name));
          continue;
        }
        auto thresholds = ytx::io::thresholds_from_json(config.value("thresholds", Json(nullptr)));
        auto report = ytx::diag::diagnose(ds->data, thresholds);
        for (const auto& rec : report.recommendations) {
          if (role_available(rec.kind, ds->data, options.fit)) kinds.push_back(rec.kind);
        }
      }
      auto report = ytx::eval::run_benchmark(ds->data, models, kinds, seed, options);
      *out = copy_string(ytx::io::dump(ytx::io::to_json(report)));
    } catch (const Json::exception& e) {
      throw ytx::ConfigError(std::string("invalid benchmark config: ") + e.what());
    }
  });
}

ytx_status ytx_report_markdown(const char* const* report_jsons, size_t count, char** out) {
  if ((!report_jsons && count) || !out) return fail(YTX_ERR_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    std::vector<ytx::eval::BenchmarkReport> reports;
    for (size_t i = 0; i < count; ++i) {
      reports.push_back(ytx::io::benchmark_from_json(parse_json(report_jsons[i], "benchmark report")));
    }
    *out = copy_string(ytx::eval::to_markdown(reports));
  });
}

}  // extern "C"
