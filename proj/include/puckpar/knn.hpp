#pragma once

#include <span>
#include <vector>

#include "puckpar/domain.hpp"
#include "puckpar/matrix.hpp"

namespace puckpar {

// k-NN keeps the whole training set.
struct KnnModel {
  Matrix features;
  std::vector<double> labels;

  friend bool operator==(const KnnModel&, const KnnModel&) = default;
};

// Throws ValidationError when there are fewer training rows than k.
KnnModel fit_knn(const KnnHyper& hyper, const Matrix& features, std::span<const double> labels);

// Euclidean distance. Neighbors are ordered by (distance, training row), so
// distance ties go to the lower row index. With inverse-distance weighting a
// neighbor at distance 0 returns its label outright.
std::vector<double> predict_knn(const KnnHyper& hyper, const KnnModel& model, const Matrix& queries);

}  // namespace puckpar
