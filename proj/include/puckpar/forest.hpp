#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "puckpar/domain.hpp"
#include "puckpar/matrix.hpp"
#include "puckpar/tree.hpp"

namespace puckpar {

struct ForestModel {
  std::vector<TreeModel> trees;
  std::vector<std::uint64_t> tree_seeds;  // one per tree, derived from the run seed

  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

// Number of features drawn per split for a given max_features setting.
std::size_t features_per_split(MaxFeatures setting, std::size_t n_features);

// Tree t is grown from its own Rng seeded with derive_seed(seed, t): that
// stream draws the bootstrap sample first, then the per-split feature subsets.
ForestModel fit_forest(const ForestHyper& hyper, const Matrix& features, std::span<const double> labels,
                       std::uint64_t seed);

// Unweighted mean of the trees' outputs, accumulated as a running mean so T
// identical trees reproduce the single-tree value exactly.
std::vector<double> predict_forest(const ForestModel& model, const Matrix& features);

}  // namespace puckpar
