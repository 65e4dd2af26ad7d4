// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ytx {

/// Failure category. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  config = 2,
  data = 3,
  domain = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Bad configuration: unknown names, missing role columns, invalid options.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error(ErrorKind::config, message) {}
};

/// The input data cannot support the requested operation.
class DataError : public Error {
 public:
  explicit DataError(const std::string& message) : Error(ErrorKind::data, message) {}
};

/// A value lies outside the domain of a transform.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message, std::optional<std::size_t> index = std::nullopt)
      : Error(ErrorKind::domain, message), index_(index) {}

  /// Offending element, when the failure is tied to one.
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  std::optional<std::size_t> index_;
};

}  // namespace ytx
