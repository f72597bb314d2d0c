#include <set>

#include <gtest/gtest.h>

#include "puckpar/forest.hpp"
#include "puckpar/rng.hpp"

using namespace puckpar;

namespace {

struct Data {
  Matrix x;
  std::vector<double> y;
  Matrix probes;
};

Data make(std::uint64_t seed) {
  Rng rng(seed);
  Data d{Matrix(120, 4), std::vector<double>(120), Matrix(100, 4)};
  for (std::size_t r = 0; r < 120; ++r) {
    for (std::size_t c = 0; c < 4; ++c) d.x(r, c) = rng.normal();
    d.y[r] = 0.5 + 0.3 * d.x(r, 2) + 0.1 * rng.normal();
  }
  for (std::size_t r = 0; r < 100; ++r) {
    for (std::size_t c = 0; c < 4; ++c) d.probes(r, c) = rng.uniform(-3, 3);
  }
  return d;
}

}  // namespace

TEST(Forest, SingleDeterministicTreeEqualsTree) {
  const auto d = make(1);
  for (auto depth : {std::optional<std::size_t>{}, std::optional<std::size_t>{3}}) {
    ForestHyper h;
    h.trees = 1;
    h.max_depth = depth;
    h.bootstrap = false;
    h.max_features = MaxFeatures::kAll;
    const auto forest = fit_forest(h, d.x, d.y, 99);
    const auto tree = fit_tree(TreeHyper{depth, 1}, d.x, d.y);
    EXPECT_EQ(forest.trees[0], tree);
    EXPECT_EQ(predict_forest(forest, d.probes), predict_tree(tree, d.probes));
  }
}

TEST(Forest, IdenticalTreesGiveTreePrediction) {
  const auto d = make(2);
  ForestHyper h;
  h.trees = 7;
  h.bootstrap = false;
  const auto forest = fit_forest(h, d.x, d.y, 5);
  const auto tree = fit_tree(TreeHyper{}, d.x, d.y);
  EXPECT_EQ(predict_forest(forest, d.probes), predict_tree(tree, d.probes));
}

TEST(Forest, MeanOfTrees) {
  const auto d = make(3);
  ForestHyper h;
  h.trees = 12;
  h.max_depth = 4;
  h.max_features = MaxFeatures::kSqrt;
  const auto forest = fit_forest(h, d.x, d.y, 17);
  const auto p = predict_forest(forest, d.probes);
  for (std::size_t i = 0; i < d.probes.rows(); ++i) {
    double sum = 0;
    for (const auto& t : forest.trees) sum += predict_tree_row(t, d.probes.row(i));
    EXPECT_NEAR(p[i], sum / 12.0, 1e-12);
  }
}

TEST(Forest, DeterministicPerSeed) {
  const auto d = make(4);
  ForestHyper h;
  h.trees = 10;
  h.max_features = MaxFeatures::kSqrt;
  const auto a = fit_forest(h, d.x, d.y, 8);
  const auto b = fit_forest(h, d.x, d.y, 8);
  const auto c = fit_forest(h, d.x, d.y, 9);
  EXPECT_EQ(a, b);
  EXPECT_NE(predict_forest(a, d.probes), predict_forest(c, d.probes));
  ASSERT_EQ(a.tree_seeds.size(), 10u);
  EXPECT_EQ(a.tree_seeds[3], derive_seed(8, 3));
}

TEST(Forest, FeaturesPerSplit) {
  EXPECT_EQ(features_per_split(MaxFeatures::kAll, 4), 4u);
  EXPECT_EQ(features_per_split(MaxFeatures::kSqrt, 4), 2u);
  EXPECT_EQ(features_per_split(MaxFeatures::kSqrt, 5), 3u);
  EXPECT_EQ(features_per_split(MaxFeatures::kSqrt, 1), 1u);
}

TEST(Forest, SubsampledSplitsUseDrawnFeaturesOnly) {
  // Only feature 2 carries signal; with two features per split some roots
  // must fall back to a noise feature.
  const auto d = make(6);
  ForestHyper h;
  h.trees = 40;
  h.max_depth = 1;
  h.max_features = MaxFeatures::kSqrt;
  h.bootstrap = false;
  const auto forest = fit_forest(h, d.x, d.y, 3);
  std::set<int> roots;
  for (const auto& t : forest.trees) roots.insert(t.nodes[0].feature);
  EXPECT_GT(roots.size(), 1u);
  EXPECT_TRUE(roots.contains(2));
}
