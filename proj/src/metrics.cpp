// Licensed under the Apache License 2.0 (see LICENSE file).

#include <cmath>
#include <numeric>

#include "ytx/error.hpp"
#include "ytx/eval.hpp"

namespace ytx::eval {

double rse(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) throw DataError("rse: actual and predicted differ in length");
  if (actual.size() < 2) throw DataError("rse needs at least two values");
  const double mean = std::accumulate(actual.begin(), actual.end(), 0.0) / static_cast<double>(actual.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    num += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    den += (actual[i] - mean) * (actual[i] - mean);
  }
  if (!(den > 0.0)) throw DataError("rse: zero denominator (constant actual values)");
  return num / den;
}

double smape(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) throw DataError("smape: actual and predicted differ in length");
  if (actual.empty()) throw DataError("smape needs at least one value");
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double scale = (std::abs(actual[i]) + std::abs(predicted[i])) / 2.0;
    if (scale == 0.0) continue;
    sum += std::abs(actual[i] - predicted[i]) / scale;
  }
  return sum / static_cast<double>(actual.size()) * 100.0;
}

}  // namespace ytx::eval
