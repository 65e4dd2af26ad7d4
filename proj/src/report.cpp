// Licensed under the Apache License 2.0 (see LICENSE file).

#include <algorithm>
#include <cstdio>

#include "ytx/eval.hpp"

namespace ytx::eval {

namespace {

std::string format_cell(const MetricSummary& s) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f ± %.2f", s.mean, s.std);
  return buf;
}

template <class T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

std::string column_label(std::string_view transform) {
  if (transform == "identity") return "Base";
  if (transform == "quantile-normal") return "QN";
  if (transform == "quantile-uniform") return "QU";
  if (transform == "yeo-johnson") return "YJ";
  if (transform == "log-offset") return "Ln";
  return std::string(transform);
}

std::string to_markdown(std::span<const BenchmarkReport> reports) {
  std::vector<std::string> models;
  std::vector<std::string> transforms;
  for (const auto& r : reports) {
    for (const auto& c : r.cells) push_unique(models, c.model);
    for (const auto& t : r.transforms) push_unique(transforms, t);
  }

  std::string out;
  for (const auto& model : models) {
    for (const char* metric : {"RSE", "SMAPE"}) {
      out += "### " + std::string(metric) + " (" + model + ")\n\n| Dataset |";
      for (const auto& t : transforms) out += " " + column_label(t) + " |";
      out += "\n|---|";
      for (std::size_t i = 0; i < transforms.size(); ++i) out += "---|";
      out += "\n";
      for (const auto& r : reports) {
        out += "| " + r.dataset + " |";
        for (const auto& t : transforms) {
          const auto* cell = r.find(model, t);
          if (!cell) out += " n/a |";
          else if (cell->error) out += " error |";
          else out += " " + format_cell(metric[0] == 'R' ? cell->rse : cell->smape) + " |";
        }
        out += "\n";
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace ytx::eval
