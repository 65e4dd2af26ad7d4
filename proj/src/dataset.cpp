// Licensed under the Apache License 2.0 (see LICENSE file).

#include "ytx/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "ytx/error.hpp"

namespace ytx {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool is_missing_marker(std::string_view s) {
  return s.empty() || s == "?" || s == "NA" || s == "N/A" || s == "NaN" || s == "nan" ||
         s == "null" || s == "NULL";
}

std::size_t column_index(const csv::Table& table, const std::string& name) {
  auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end()) throw ConfigError("missing role column '" + name + "'");
  return static_cast<std::size_t>(it - table.header.begin());
}

enum class Use { feature, target, key, number, context, ignored };

}  // namespace

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (is_missing_marker(cell)) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

RowContext Dataset::row_context() const {
  RowContext ctx;
  ctx.subject = subject_keys;
  ctx.trial = trial_keys;
  ctx.time = time_keys;
  ctx.frame = frame;
  ctx.price_index = price_index;
  if (!context.empty()) ctx.context = &context;
  return ctx;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  auto pick = [&](const auto& v) {
    std::remove_cvref_t<decltype(v)> out;
    if (v.empty()) return out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(v[i]);
    return out;
  };
  Dataset out;
  out.features = features.select_rows(indices);
  out.target = pick(target);
  out.feature_names = feature_names;
  out.roles = roles;
  out.subject_keys = pick(subject_keys);
  out.trial_keys = pick(trial_keys);
  out.time_keys = pick(time_keys);
  out.frame = pick(frame);
  out.price_index = pick(price_index);
  if (!context.empty()) out.context = context.select_rows(indices);
  out.source_rows = pick(source_rows);
  out.dropped_rows = 0;
  return out;
}

Dataset Dataset::with_target(std::vector<double> y) const {
  if (y.size() != rows()) throw DataError("replacement target has the wrong length");
  Dataset out = *this;
  out.target = std::move(y);
  return out;
}

ColumnRoles default_roles(const csv::Table& table) {
  if (table.header.empty()) throw DataError("CSV input has an empty header");
  ColumnRoles roles;
  roles.target = table.header.back();
  return roles;
}

Dataset build_dataset(const csv::Table& table, const ColumnRoles& roles) {
  const std::size_t ncols = table.header.size();
  std::vector<Use> use(ncols, Use::feature);

  const std::size_t target_col = column_index(table, roles.target);
  use[target_col] = Use::target;

  auto claim = [&](const std::string& name, Use u) {
    const std::size_t c = column_index(table, name);
    if (c == target_col) throw ConfigError("target column '" + name + "' cannot take another role");
    use[c] = u;
    return c;
  };
  std::optional<std::size_t> subject_col, trial_col, time_col, frame_col, price_col;
  if (roles.subject) subject_col = claim(*roles.subject, Use::key);
  if (roles.trial) trial_col = claim(*roles.trial, Use::key);
  if (roles.time) time_col = claim(*roles.time, Use::key);
  if (roles.frame) frame_col = claim(*roles.frame, Use::number);
  if (roles.price_index) price_col = claim(*roles.price_index, Use::number);
  std::vector<std::size_t> context_cols;
  for (const auto& name : roles.context) context_cols.push_back(claim(name, Use::context));
  for (const auto& name : roles.ignore) {
    const std::size_t c = column_index(table, name);
    if (use[c] == Use::feature) use[c] = Use::ignored;
  }

  // Column typing over all rows: numeric iff every non-missing cell parses.
  std::vector<bool> numeric(ncols, true);
  for (std::size_t c = 0; c < ncols; ++c) {
    if (use[c] != Use::feature) continue;
    for (const auto& row : table.rows) {
      auto cell = trim(row[c]);
      if (!is_missing_marker(cell) && !parse_number(cell)) {
        numeric[c] = false;
        break;
      }
    }
  }

  // Row filter.
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    bool ok = true;
    for (std::size_t c = 0; c < ncols && ok; ++c) {
      auto cell = trim(row[c]);
      switch (use[c]) {
        case Use::target:
        case Use::number:
        case Use::context:
          ok = parse_number(cell).has_value();
          break;
        case Use::key:
          ok = !is_missing_marker(cell);
          break;
        case Use::feature:
          ok = !is_missing_marker(cell) && (!numeric[c] || parse_number(cell).has_value());
          break;
        case Use::ignored:
          break;
      }
    }
    if (ok) kept.push_back(r);
  }
  if (kept.empty()) throw DataError("zero usable rows in input");

  // Feature layout: numeric columns as-is, categorical ones one-hot.
  struct FeatureColumn {
    std::size_t source;
    std::vector<std::string> categories;  // empty for numeric
  };
  std::vector<FeatureColumn> layout;
  Dataset ds;
  for (std::size_t c = 0; c < ncols; ++c) {
    if (use[c] != Use::feature && use[c] != Use::context) continue;
    FeatureColumn fc{c, {}};
    if (use[c] == Use::feature && !numeric[c]) {
      std::set<std::string> cats;
      for (auto r : kept) cats.insert(std::string(trim(table.rows[r][c])));
      fc.categories.assign(cats.begin(), cats.end());
      for (const auto& cat : fc.categories) ds.feature_names.push_back(table.header[c] + "=" + cat);
    } else {
      ds.feature_names.push_back(table.header[c]);
    }
    layout.push_back(std::move(fc));
  }

  const std::size_t n = kept.size();
  ds.features = Matrix(n, ds.feature_names.size());
  ds.target.reserve(n);
  if (!context_cols.empty()) ds.context = Matrix(n, context_cols.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = table.rows[kept[i]];
    ds.target.push_back(*parse_number(row[target_col]));
    std::size_t f = 0;
    for (const auto& fc : layout) {
      if (fc.categories.empty()) {
        ds.features(i, f++) = *parse_number(row[fc.source]);
      } else {
        auto cell = trim(row[fc.source]);
        for (const auto& cat : fc.categories) ds.features(i, f++) = (cell == cat) ? 1.0 : 0.0;
      }
    }
    if (subject_col) ds.subject_keys.emplace_back(trim(row[*subject_col]));
    if (trial_col) ds.trial_keys.emplace_back(trim(row[*trial_col]));
    if (time_col) ds.time_keys.emplace_back(trim(row[*time_col]));
    if (frame_col) ds.frame.push_back(*parse_number(row[*frame_col]));
    if (price_col) ds.price_index.push_back(*parse_number(row[*price_col]));
    for (std::size_t k = 0; k < context_cols.size(); ++k) {
      ds.context(i, k) = *parse_number(row[context_cols[k]]);
    }
  }
  ds.roles = roles;
  ds.source_rows = std::move(kept);
  ds.dropped_rows = table.rows.size() - n;
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const ColumnRoles& roles) {
  return build_dataset(csv::read(path), roles);
}

}  // namespace ytx
