// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ytx/csv.hpp"
#include "ytx/matrix.hpp"

namespace ytx {

/// Which CSV columns play which part in the target transformations.
struct ColumnRoles {
  std::string target;
  std::optional<std::string> subject;
  std::optional<std::string> time;
  std::optional<std::string> frame;
  std::optional<std::string> trial;
  std::vector<std::string> context;
  std::optional<std::string> price_index;
  /// Columns excluded from the feature matrix (e.g. free-text identifiers).
  std::vector<std::string> ignore;

  bool operator==(const ColumnRoles&) const = default;
};

/// Per-row side information needed by the contextual transforms. Non-owning;
/// empty spans mean the role is absent.
struct RowContext {
  std::span<const std::string> subject;
  std::span<const std::string> trial;
  std::span<const std::string> time;
  std::span<const double> frame;
  std::span<const double> price_index;
  const Matrix* context = nullptr;

  std::size_t context_columns() const { return context ? context->cols() : 0; }
};

/// Feature matrix, target vector and role columns after ingestion. Immutable
/// once built; every vector has one entry per kept row.
class Dataset {
 public:
  Matrix features;
  std::vector<double> target;
  std::vector<std::string> feature_names;
  ColumnRoles roles;

  std::vector<std::string> subject_keys;
  std::vector<std::string> trial_keys;
  std::vector<std::string> time_keys;
  std::vector<double> frame;
  std::vector<double> price_index;
  Matrix context;

  /// Index into the source CSV's data rows for each kept row.
  std::vector<std::size_t> source_rows;
  std::size_t dropped_rows = 0;

  std::size_t rows() const noexcept { return target.size(); }
  std::size_t cols() const noexcept { return features.cols(); }

  RowContext row_context() const;
  Dataset subset(std::span<const std::size_t> indices) const;
  /// Same rows with the target replaced (feature/role columns unchanged).
  Dataset with_target(std::vector<double> y) const;

  bool operator==(const Dataset&) const = default;
};

/// Roles whose only named column is the target; used when no roles are given.
ColumnRoles default_roles(const csv::Table& table);

/// Builds a Dataset from a parsed table. Rows with a missing or non-finite
/// target, role value or numeric feature are dropped and counted. Non-numeric
/// feature columns are one-hot encoded with categories in lexicographic order.
Dataset build_dataset(const csv::Table& table, const ColumnRoles& roles);

Dataset load_csv(const std::filesystem::path& path, const ColumnRoles& roles);

/// Strict numeric parse of a trimmed cell; missing markers ("", "?", "NA",
/// "NaN", "null") and non-finite values yield nullopt.
std::optional<double> parse_number(std::string_view cell);

}  // namespace ytx
