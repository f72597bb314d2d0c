#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "puckpar/domain.hpp"
#include "puckpar/matrix.hpp"

namespace puckpar {

class Rng;

// One node of a regression tree. Leaves have feature == -1 and children -1.
// Internal nodes send x[feature] <= threshold to `left`.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::size_t n_features = 0;

  friend bool operator==(const TreeModel&, const TreeModel&) = default;
};

struct TreeGrowth {
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_leaf = 1;
  // Features drawn per split; 0 means all features.
  std::size_t features_per_split = 0;
};

// CART regression tree on the given sample rows (duplicates allowed, as in a
// bootstrap sample). Splits maximise variance reduction over midpoint
// thresholds between consecutive distinct values; ties go to the lower
// feature index, then the lower threshold. A node becomes a leaf when it is
// pure, at max depth, too small to give both children min_samples_leaf rows,
// or has no admissible threshold. `rng` is only drawn from when
// features_per_split selects a strict subset.
TreeModel grow_tree(const TreeGrowth& growth, const Matrix& features, std::span<const double> labels,
                    std::span<const std::size_t> samples, Rng* rng);

TreeModel fit_tree(const TreeHyper& hyper, const Matrix& features, std::span<const double> labels);

double predict_tree_row(const TreeModel& tree, std::span<const double> row);
std::vector<double> predict_tree(const TreeModel& tree, const Matrix& features);

// Throws ValidationError if child links are out of range, not forward, or a
// feature index is out of range. Used when loading archives.
void check_tree(const TreeModel& tree);

}  // namespace puckpar
