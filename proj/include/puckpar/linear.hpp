#pragma once

#include <span>
#include <vector>

#include "puckpar/domain.hpp"
#include "puckpar/matrix.hpp"

namespace puckpar {

struct LinearModel {
  std::vector<double> coefficients;
  double intercept = 0.0;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

// Ridge regression from the normal equations (X'X + lambda I) w = X'y on
// centered data, so the intercept is never penalized. Rank-deficient systems
// (constant columns with lambda = 0) give those directions a zero weight.
LinearModel fit_linear(const LinearHyper& hyper, const Matrix& features, std::span<const double> labels);

std::vector<double> predict_linear(const LinearModel& model, const Matrix& features);

}  // namespace puckpar
