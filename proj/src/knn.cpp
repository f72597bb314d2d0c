#include "puckpar/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include <fmt/format.h>

namespace puckpar {

KnnModel fit_knn(const KnnHyper& hyper, const Matrix& features, std::span<const double> labels) {
  if (labels.size() != features.rows()) throw ShapeError("knn: feature rows and labels differ in length");
  if (features.rows() < hyper.k) {
    throw ValidationError(fmt::format("knn: k = {} exceeds the {} training rows", hyper.k, features.rows()));
  }
  return KnnModel{features, std::vector<double>(labels.begin(), labels.end())};
}

std::vector<double> predict_knn(const KnnHyper& hyper, const KnnModel& model, const Matrix& queries) {
  const std::size_t n = model.features.rows();
  const std::size_t p = model.features.cols();
  if (queries.cols() != p && !queries.empty()) {
    throw ShapeError(fmt::format("knn: expected {} features, got {}", p, queries.cols()));
  }
  if (hyper.k > n) throw ValidationError("knn: k exceeds the stored training rows");

  std::vector<std::pair<double, std::size_t>> dist(n);
  std::vector<double> out(queries.rows());
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const auto query = queries.row(q);
    for (std::size_t i = 0; i < n; ++i) {
      const auto train = model.features.row(i);
      double d2 = 0;
      for (std::size_t j = 0; j < p; ++j) {
        const double d = query[j] - train[j];
        d2 += d * d;
      }
      dist[i] = {d2, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(hyper.k), dist.end());

    if (hyper.weighting == KnnWeighting::kUniform) {
      double sum = 0;
      for (std::size_t m = 0; m < hyper.k; ++m) sum += model.labels[dist[m].second];
      out[q] = sum / static_cast<double>(hyper.k);
      continue;
    }
    if (dist[0].first == 0.0) {
      out[q] = model.labels[dist[0].second];
      continue;
    }
    double weighted = 0, total = 0;
    for (std::size_t m = 0; m < hyper.k; ++m) {
      const double w = 1.0 / std::sqrt(dist[m].first);
      weighted += w * model.labels[dist[m].second];
      total += w;
    }
    out[q] = weighted / total;
  }
  return out;
}

}  // namespace puckpar
