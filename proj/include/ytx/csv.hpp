// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ytx::csv {

/// Raw table of string cells: header plus data rows, RFC-4180 quoting.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Throws DataError on a missing file, empty input or ragged rows.
Table read(const std::filesystem::path& path);
Table parse(std::string_view text);

std::string format(const Table& table);
void write(const std::filesystem::path& path, const Table& table);

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

}  // namespace ytx::csv
