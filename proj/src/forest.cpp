#include "puckpar/forest.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "puckpar/rng.hpp"

namespace puckpar {

std::size_t features_per_split(MaxFeatures setting, std::size_t n_features) {
  if (setting == MaxFeatures::kAll) return n_features;
  const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_features))));
  return std::max<std::size_t>(1, m);
}

ForestModel fit_forest(const ForestHyper& hyper, const Matrix& features, std::span<const double> labels,
                       std::uint64_t seed) {
  const std::size_t n = features.rows();
  if (n == 0) throw ValidationError("forest: no training rows");
  if (labels.size() != n) throw ShapeError("forest: feature rows and labels differ in length");

  const std::size_t per_split = features_per_split(hyper.max_features, features.cols());
  TreeGrowth growth{hyper.max_depth, hyper.min_samples_leaf, per_split >= features.cols() ? 0 : per_split};

  ForestModel model;
  model.trees.reserve(hyper.trees);
  model.tree_seeds.reserve(hyper.trees);
  std::vector<std::size_t> samples(n);
  for (std::size_t t = 0; t < hyper.trees; ++t) {
    const std::uint64_t tree_seed = derive_seed(seed, t);
    Rng rng(tree_seed);
    if (hyper.bootstrap) {
      for (auto& s : samples) s = rng.uniform_index(n);
    } else {
      std::iota(samples.begin(), samples.end(), std::size_t{0});
    }
    model.trees.push_back(grow_tree(growth, features, labels, samples, &rng));
    model.tree_seeds.push_back(tree_seed);
  }
  return model;
}

std::vector<double> predict_forest(const ForestModel& model, const Matrix& features) {
  if (model.trees.empty()) throw ValidationError("forest: model has no trees");
  const std::size_t width = model.trees.front().n_features;
  if (features.cols() != width && !features.empty()) {
    throw ShapeError(fmt::format("forest: expected {} features, got {}", width, features.cols()));
  }
  std::vector<double> out(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto row = features.row(i);
    double mean = 0;
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
      mean += (predict_tree_row(model.trees[t], row) - mean) / static_cast<double>(t + 1);
    }
    out[i] = mean;
  }
  return out;
}

}  // namespace puckpar
