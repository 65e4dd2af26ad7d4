// Licensed under the Apache License 2.0 (see LICENSE file).
//
// ytx: diagnose, transform, benchmark and report on regression targets.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ytx/ytx.h"

namespace {

using Json = nlohmann::json;

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kData = 3, kDomain = 4 };

struct CliError {
  int code;
  std::string message;
};

struct Options {
  std::string input;
  std::string roles;
  std::vector<std::string> transforms;
  std::vector<std::string> models;
  std::optional<double> alpha;
  std::uint64_t seed = 42;
  std::string out_json;
  std::string out_md;
  std::string out_csv;
  std::vector<std::string> thresholds;
  std::string name;
  std::string deflation_index;
  std::string base_time;
  std::vector<std::string> reports;
};

int exit_code(ytx_status s) {
  switch (s) {
    case YTX_ERR_CONFIG:
    case YTX_ERR_INVALID_ARGUMENT: return kConfig;
    case YTX_ERR_DATA: return kData;
    case YTX_ERR_DOMAIN: return kDomain;
    default: return kInternal;
  }
}

void check(ytx_status s) {
  if (s != YTX_OK) throw CliError{exit_code(s), ytx_last_error()};
}

struct DatasetDeleter {
  void operator()(ytx_dataset* d) const { ytx_dataset_free(d); }
};
struct TransformDeleter {
  void operator()(ytx_transform* t) const { ytx_transform_free(t); }
};
using DatasetPtr = std::unique_ptr<ytx_dataset, DatasetDeleter>;
using TransformPtr = std::unique_ptr<ytx_transform, TransformDeleter>;

std::string take(char* s) {
  std::string out(s ? s : "");
  ytx_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kData, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw CliError{kData, "cannot write '" + path + "'"};
}

// --roles takes either a path to a JSON file or the JSON text itself.
std::string roles_text(const std::string& roles) {
  if (roles.empty()) return {};
  std::error_code ec;
  if (std::filesystem::is_regular_file(roles, ec)) return read_file(roles);
  return roles;
}

Json threshold_json(const std::vector<std::string>& pairs) {
  Json j = Json::object();
  for (const auto& kv : pairs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw CliError{kConfig, "threshold '" + kv + "' is not KEY=VALUE"};
    const std::string value = kv.substr(eq + 1);
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') throw CliError{kConfig, "threshold '" + kv + "' has a non-numeric value"};
    j[kv.substr(0, eq)] = v;
  }
  return j;
}

std::size_t thread_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("YTX_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || cap < 1) throw CliError{kConfig, "YTX_THREADS must be a positive integer"};
    n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return n;
}

DatasetPtr load(const Options& o) {
  ytx_dataset* ds = nullptr;
  const std::string roles = roles_text(o.roles);
  check(ytx_dataset_load_csv(o.input.c_str(), roles.empty() ? nullptr : roles.c_str(), &ds));
  return DatasetPtr(ds);
}

void validate_transforms(const std::vector<std::string>& names, bool allow_auto) {
  for (const auto& name : names) {
    if (allow_auto && name == "auto") continue;
    if (!ytx_transform_kind_known(name.c_str())) throw CliError{kConfig, "unknown transform '" + name + "'"};
  }
}

std::string flag_line(const char* label, const Json& v) {
  std::ostringstream s;
  s << "  " << label << ": " << (v.at("flagged").get<bool>() ? "FLAGGED" : "ok");
  s << " (statistic " << v.at("statistic").dump();
  if (v.contains("p_value")) s << ", p " << v.at("p_value").dump();
  s << ")";
  if (v.contains("warning")) s << " [" << v.at("warning").get<std::string>() << "]";
  return s.str();
}

int cmd_diagnose(const Options& o) {
  validate_transforms(o.transforms, true);
  const std::string thresholds = threshold_json(o.thresholds).dump();
  auto ds = load(o);
  char* out = nullptr;
  check(ytx_diagnose(ds.get(), thresholds.c_str(), &out));
  const std::string text = take(out);
  if (!o.out_json.empty()) write_file(o.out_json, text);

  const Json report = Json::parse(text);
  std::size_t rows = 0, features = 0;
  ytx_dataset_shape(ds.get(), &rows, &features);
  std::cout << "rows: " << rows << " (dropped " << ytx_dataset_dropped_rows(ds.get()) << "), features: " << features
            << "\n";
  for (const char* key : {"subjective", "frame", "trend", "context"}) {
    if (report.contains(key)) std::cout << flag_line(key, report.at(key)) << "\n";
  }
  const auto& d = report.at("distribution");
  std::cout << "  distribution: " << (d.at("flagged").get<bool>() ? "FLAGGED" : "ok") << " (skewness "
            << d.at("skewness").dump() << (d.at("skewed").get<bool>() ? " skewed" : "") << ", gap score "
            << d.at("gap_score").dump() << (d.at("gap").get<bool>() ? " gap" : "") << ", Breusch-Pagan p "
            << d.at("heteroscedasticity").at("p_value").dump()
            << (d.at("heteroscedasticity").at("flagged").get<bool>() ? " heteroscedastic" : "") << ")\n";
  if (d.contains("warning")) std::cout << "  warning: " << d.at("warning").get<std::string>() << "\n";
  const auto& recs = report.at("recommendations");
  if (recs.empty()) std::cout << "recommendations: none\n";
  for (const auto& r : recs) {
    std::cout << "recommend " << r.at("transform").get<std::string>() << ": " << r.at("reason").get<std::string>()
              << "\n";
  }
  return kOk;
}

Json fit_options(const Options& o) {
  Json j = Json::object();
  if (!o.deflation_index.empty()) j["deflation_index"] = o.deflation_index;
  if (!o.base_time.empty()) j["base_time"] = o.base_time;
  return j;
}

int cmd_transform(const Options& o) {
  if (o.transforms.size() != 1) throw CliError{kConfig, "transform takes exactly one --transform"};
  validate_transforms(o.transforms, false);
  if (o.out_csv.empty()) throw CliError{kConfig, "transform needs --out-csv"};
  auto ds = load(o);
  ytx_transform* raw = nullptr;
  check(ytx_transform_fit(ds.get(), o.transforms.front().c_str(), fit_options(o).dump().c_str(), &raw));
  TransformPtr t(raw);
  check(ytx_transform_write_csv(t.get(), ds.get(), o.out_csv.c_str()));
  char* out = nullptr;
  check(ytx_transform_to_json(t.get(), &out));
  const std::string sidecar = take(out);
  const std::string sidecar_path = o.out_json.empty() ? o.out_csv + ".json" : o.out_json;
  write_file(sidecar_path, sidecar);
  std::cout << "fitted " << ytx_transform_kind(t.get()) << "; wrote " << o.out_csv << " and " << sidecar_path << "\n";
  return kOk;
}

int cmd_benchmark(const Options& o) {
  validate_transforms(o.transforms, true);
  Json config{{"seed", o.seed}, {"threads", thread_count()}, {"thresholds", threshold_json(o.thresholds)}};
  config["models"] = o.models.empty() ? std::vector<std::string>{"ridge", "lasso"} : o.models;
  config["transforms"] = o.transforms;
  if (o.alpha) config["alpha"] = *o.alpha;
  config["dataset_name"] = o.name.empty() ? std::filesystem::path(o.input).stem().string() : o.name;
  config.update(fit_options(o));

  auto ds = load(o);
  char* out = nullptr;
  check(ytx_benchmark(ds.get(), config.dump().c_str(), &out));
  const std::string text = take(out);
  if (!o.out_json.empty()) write_file(o.out_json, text);

  const char* docs[] = {text.c_str()};
  char* md = nullptr;
  check(ytx_report_markdown(docs, 1, &md));
  const std::string markdown = take(md);
  if (!o.out_md.empty()) write_file(o.out_md, markdown);
  std::cout << markdown;
  const Json report = Json::parse(text);
  for (const auto& w : report.at("warnings")) std::cout << "warning: " << w.get<std::string>() << "\n";
  return kOk;
}

int cmd_report(const Options& o) {
  if (o.reports.empty()) throw CliError{kConfig, "report needs at least one --in"};
  std::vector<std::string> texts;
  for (const auto& path : o.reports) texts.push_back(read_file(path));
  std::vector<const char*> docs;
  for (const auto& t : texts) docs.push_back(t.c_str());
  char* md = nullptr;
  check(ytx_report_markdown(docs.data(), docs.size(), &md));
  const std::string markdown = take(md);
  if (!o.out_md.empty()) write_file(o.out_md, markdown);
  std::cout << markdown;
  return kOk;
}

void add_data_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "Input CSV")->required();
  cmd->add_option("--roles", o.roles, "Column roles: JSON file or inline JSON (default: last column is the target)");
  cmd->add_option("--threshold", o.thresholds, "Diagnostic threshold override KEY=VALUE");
  cmd->add_option("--deflation-index", o.deflation_index, "CSV of (time key, index value) for deflate");
  cmd->add_option("--base-time", o.base_time, "Base period for deflate");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Invertible target transformations for regression: diagnose, transform, benchmark"};
  app.set_version_flag("--version", std::string(ytx_version()));
  app.require_subcommand(1);

  auto* diagnose = app.add_subcommand("diagnose", "Run the target diagnostics and print recommendations");
  add_data_options(diagnose, o);
  diagnose->add_option("--transform", o.transforms, "Transform names to validate");
  diagnose->add_option("--out-json", o.out_json, "Write the diagnostic report here");

  auto* transform = app.add_subcommand("transform", "Fit one transform and write the transformed CSV");
  add_data_options(transform, o);
  transform->add_option("--transform", o.transforms, "Transform kind")->required();
  transform->add_option("--out-csv", o.out_csv, "Transformed CSV path")->required();
  transform->add_option("--out-json", o.out_json, "Sidecar JSON path (default: <out-csv>.json)");

  auto* benchmark = app.add_subcommand("benchmark", "5x2 cross-validated comparison against the raw target");
  add_data_options(benchmark, o);
  benchmark->add_option("--transform", o.transforms, "Transform kind, or 'auto' for the diagnostics' picks");
  benchmark->add_option("--model", o.models, "ridge or lasso (default: both)");
  benchmark->add_option("--alpha", o.alpha, "Regularization strength for every model");
  benchmark->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  benchmark->add_option("--name", o.name, "Dataset label in the report (default: file stem)");
  benchmark->add_option("--out-json", o.out_json, "Write the benchmark report here");
  benchmark->add_option("--out-md", o.out_md, "Write the markdown tables here");

  auto* report = app.add_subcommand("report", "Merge benchmark reports into markdown tables");
  report->add_option("--in", o.reports, "Benchmark report JSON (repeatable)")->required();
  report->add_option("--out-md", o.out_md, "Write the markdown tables here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*diagnose) return cmd_diagnose(o);
    if (*transform) return cmd_transform(o);
    if (*benchmark) return cmd_benchmark(o);
    return cmd_report(o);
  } catch (const CliError& e) {
    std::cerr << "ytx: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "ytx: " << e.what() << "\n";
    return kInternal;
  }
}
