#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "puckpar/error.hpp"

namespace puckpar {

inline double mean_absolute_error(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size()) throw ShapeError("prediction and label counts differ");
  if (predicted.empty()) throw ValidationError("mean absolute error of an empty set");
  double sum = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) sum += std::abs(predicted[i] - actual[i]);
  return sum / static_cast<double>(predicted.size());
}

// Median with the even-count rule: average of the two middle values.
inline double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace puckpar
