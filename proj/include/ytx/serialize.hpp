// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <json.hpp>

#include "ytx/dataset.hpp"
#include "ytx/diagnostics.hpp"
#include "ytx/eval.hpp"
#include "ytx/transform.hpp"

namespace ytx::io {

using Json = nlohmann::json;

inline constexpr const char* kTransformSchema = "ytx.transform/1";
inline constexpr const char* kDiagnosticsSchema = "ytx.diagnostics/1";
inline constexpr const char* kBenchmarkSchema = "ytx.benchmark/1";

// Parsers throw ConfigError on malformed documents.

Json to_json(const ColumnRoles& roles);
ColumnRoles roles_from_json(const Json& j);
ColumnRoles parse_roles(std::string_view text);

Json to_json(const FittedTransform& t);
FittedTransform transform_from_json(const Json& j);

Json to_json(const diag::Thresholds& t);
diag::Thresholds thresholds_from_json(const Json& j);

Json to_json(const diag::DiagnosticReport& r);
diag::DiagnosticReport diagnostics_from_json(const Json& j);

Json to_json(const eval::BenchmarkReport& r);
eval::BenchmarkReport benchmark_from_json(const Json& j);

/// Pretty-printed document with a trailing newline.
std::string dump(const Json& j);

}  // namespace ytx::io
