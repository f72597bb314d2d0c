#include "puckpar/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "puckpar/rng.hpp"

namespace puckpar {

namespace {

// Grows a tree over "positions" 0..m-1, each standing for one entry of the
// sample list. sorted_[f] holds the positions ordered by feature f (ties by
// position); every node owns the same contiguous range in each of them.
class Grower {
 public:
  Grower(const TreeGrowth& growth, const Matrix& x, std::span<const double> y, std::span<const std::size_t> samples,
         Rng* rng)
      : growth_(growth), x_(x), samples_(samples), rng_(rng), n_features_(x.cols()) {
    const std::size_t m = samples.size();
    y_.resize(m);
    for (std::size_t pos = 0; pos < m; ++pos) y_[pos] = y[samples[pos]];
    sorted_.assign(n_features_, std::vector<std::size_t>(m));
    for (std::size_t f = 0; f < n_features_; ++f) {
      auto& order = sorted_[f];
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return value(a, f) < value(b, f); });
    }
    goes_left_.assign(m, 0);
    scratch_.resize(m);
    all_features_.resize(n_features_);
    std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});
  }

  TreeModel grow() {
    TreeModel tree;
    tree.n_features = n_features_;
    if (!samples_.empty()) build(tree, 0, samples_.size(), 0);
    return tree;
  }

 private:
  struct Candidate {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left_count = 0;
    double score = -std::numeric_limits<double>::infinity();
  };

  double value(std::size_t pos, std::size_t f) const { return x_(samples_[pos], f); }

  int build(TreeModel& tree, std::size_t begin, std::size_t end, std::size_t depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    const std::size_t n = end - begin;
    double sum = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = y_[sorted_[0][i]];
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    tree.nodes[id].value = sum / static_cast<double>(n);

    const bool depth_ok = !growth_.max_depth || depth < *growth_.max_depth;
    if (!depth_ok || lo == hi || n < 2 * growth_.min_samples_leaf) return id;

    const Candidate best = find_split(begin, end, sum);
    if (!best.found) return id;

    partition(begin, end, best);
    const std::size_t mid = begin + best.left_count;
    const int left = build(tree, begin, mid, depth + 1);
    const int right = build(tree, mid, end, depth + 1);
    auto& node = tree.nodes[id];
    node.feature = static_cast<int>(best.feature);
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  std::vector<std::size_t> draw_features() {
    const std::size_t want = growth_.features_per_split;
    if (want == 0 || want >= n_features_ || rng_ == nullptr) return all_features_;
    std::vector<std::size_t> pool = all_features_;
    for (std::size_t i = 0; i < want; ++i) {
      const std::size_t j = i + rng_->uniform_index(n_features_ - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(want);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  Candidate find_split(std::size_t begin, std::size_t end, double total) {
    Candidate best;
    const std::size_t n = end - begin;
    const std::size_t min_leaf = growth_.min_samples_leaf;
    for (std::size_t f : draw_features()) {
      const auto& order = sorted_[f];
      double left_sum = 0;
      for (std::size_t i = begin; i + 1 < end; ++i) {
        left_sum += y_[order[i]];
        const std::size_t nl = i - begin + 1;
        const std::size_t nr = n - nl;
        if (nl < min_leaf) continue;
        if (nr < min_leaf) break;
        const double v = value(order[i], f);
        const double next = value(order[i + 1], f);
        if (!(v < next)) continue;
        const double right_sum = total - left_sum;
        const double score =
            left_sum * left_sum / static_cast<double>(nl) + right_sum * right_sum / static_cast<double>(nr);
        if (score > best.score) {
          double threshold = v + (next - v) / 2.0;
          if (!(threshold < next)) threshold = v;
          best = Candidate{true, f, threshold, nl, score};
        }
      }
    }
    return best;
  }

  void partition(std::size_t begin, std::size_t end, const Candidate& split) {
    const auto& chosen = sorted_[split.feature];
    for (std::size_t i = begin; i < end; ++i) goes_left_[chosen[i]] = 0;
    for (std::size_t i = begin; i < begin + split.left_count; ++i) goes_left_[chosen[i]] = 1;
    for (std::size_t f = 0; f < n_features_; ++f) {
      auto& order = sorted_[f];
      std::size_t l = begin;
      std::size_t r = 0;
      for (std::size_t i = begin; i < end; ++i) {
        if (goes_left_[order[i]]) order[l++] = order[i];
        else scratch_[r++] = order[i];
      }
      std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(r), order.begin() + static_cast<std::ptrdiff_t>(l));
    }
  }

  const TreeGrowth& growth_;
  const Matrix& x_;
  std::span<const std::size_t> samples_;
  Rng* rng_;
  std::size_t n_features_;
  std::vector<double> y_;
  std::vector<std::vector<std::size_t>> sorted_;
  std::vector<unsigned char> goes_left_;
  std::vector<std::size_t> scratch_;
  std::vector<std::size_t> all_features_;
};

}  // namespace

TreeModel grow_tree(const TreeGrowth& growth, const Matrix& features, std::span<const double> labels,
                    std::span<const std::size_t> samples, Rng* rng) {
  if (labels.size() != features.rows()) throw ShapeError("tree: feature rows and labels differ in length");
  if (samples.empty()) throw ValidationError("tree: no training rows");
  if (growth.min_samples_leaf < 1) throw ValidationError("tree: min_samples_leaf must be at least 1");
  for (std::size_t s : samples) {
    if (s >= features.rows()) throw ShapeError("tree: sample index out of range");
  }
  return Grower(growth, features, labels, samples, rng).grow();
}

TreeModel fit_tree(const TreeHyper& hyper, const Matrix& features, std::span<const double> labels) {
  std::vector<std::size_t> samples(features.rows());
  std::iota(samples.begin(), samples.end(), std::size_t{0});
  TreeGrowth growth{hyper.max_depth, hyper.min_samples_leaf, 0};
  return grow_tree(growth, features, labels, samples, nullptr);
}

double predict_tree_row(const TreeModel& tree, std::span<const double> row) {
  int id = 0;
  while (!tree.nodes[id].is_leaf()) {
    const auto& node = tree.nodes[id];
    id = row[node.feature] <= node.threshold ? node.left : node.right;
  }
  return tree.nodes[id].value;
}

std::vector<double> predict_tree(const TreeModel& tree, const Matrix& features) {
  if (features.cols() != tree.n_features && !features.empty()) {
    throw ShapeError(fmt::format("tree: expected {} features, got {}", tree.n_features, features.cols()));
  }
  if (tree.nodes.empty()) throw ValidationError("tree: model has no nodes");
  std::vector<double> out(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) out[i] = predict_tree_row(tree, features.row(i));
  return out;
}

void check_tree(const TreeModel& tree) {
  if (tree.nodes.empty()) throw ValidationError("tree: no nodes");
  const int count = static_cast<int>(tree.nodes.size());
  for (int id = 0; id < count; ++id) {
    const auto& node = tree.nodes[id];
    if (node.is_leaf()) {
      if (node.left != -1 || node.right != -1) throw ValidationError(fmt::format("tree: leaf {} has children", id));
      continue;
    }
    if (static_cast<std::size_t>(node.feature) >= tree.n_features) {
      throw ValidationError(fmt::format("tree: node {} splits on feature {} of {}", id, node.feature, tree.n_features));
    }
    // Children always come after their parent, which also rules out cycles.
    if (node.left <= id || node.left >= count || node.right <= id || node.right >= count) {
      throw ValidationError(fmt::format("tree: node {} has invalid child links", id));
    }
  }
}

}  // namespace puckpar
