#include <algorithm>

#include <gtest/gtest.h>

#include "puckpar/evaluate.hpp"
#include "puckpar/rng.hpp"
#include "support/oracles.hpp"

using namespace puckpar;
using namespace puckpar::testing;

namespace {

std::vector<ActualPpg> pool(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ActualPpg> out;
  for (std::size_t i = 0; i < n; ++i) {
    // Coarse values so ties are common.
    out.push_back({"p" + std::to_string(rng.uniform_index(100000)), std::round(rng.uniform(0, 1.5) * 20) / 20});
  }
  return out;
}

}  // namespace

TEST(TopN, ClampAndOrder) {
  const std::vector<ActualPpg> three = {{"c", 0.5}, {"a", 1.2}, {"b", 0.9}};
  const auto all = top_n_by_actual(three, 10);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].player_id, "a");
  EXPECT_EQ(all[1].player_id, "b");
  EXPECT_EQ(all[2].player_id, "c");
  const auto tie = top_n_by_actual({{"b", 1.0}, {"a", 1.0}}, 1);
  ASSERT_EQ(tie.size(), 1u);
  EXPECT_EQ(tie[0].player_id, "a");
  EXPECT_THROW(top_n_by_actual(three, 0), ValidationError);
}

TEST(TopN, PrefixProperty) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = pool(60, seed);
    for (std::size_t n = 1; n < 65; ++n) {
      const auto a = top_n_by_actual(p, n);
      const auto b = top_n_by_actual(p, n + 1);
      ASSERT_LE(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].player_id, b[i].player_id);
        ASSERT_EQ(a[i].ppg, b[i].ppg);
      }
    }
  }
}

TEST(ErrorSummary, TopTenTable) {
  const auto s = error_summary(kTopTenPairs, "mlp");
  EXPECT_NEAR(s.mean_abs_error, kTopTenMean, 1e-12);
  EXPECT_NEAR(s.median_abs_error, kTopTenMedian, 1e-12);
  EXPECT_EQ(s.n, 10u);
  EXPECT_EQ(s.source, "mlp");
}

TEST(ErrorSummary, SmallCases) {
  const std::vector<std::pair<double, double>> same = {{0.4, 0.4}, {1.1, 1.1}};
  const auto z = error_summary(same, "x");
  EXPECT_EQ(z.mean_abs_error, 0.0);
  EXPECT_EQ(z.median_abs_error, 0.0);
  const std::vector<std::pair<double, double>> sym = {{1, 0}, {0, 1}};
  const auto s = error_summary(sym, "x");
  EXPECT_EQ(s.mean_abs_error, 1.0);
  EXPECT_EQ(s.median_abs_error, 1.0);
  EXPECT_THROW(error_summary({}, "x"), ValidationError);
}

TEST(ErrorSummary, PermutationInvariant) {
  Rng rng(3);
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 41; ++i) pairs.emplace_back(rng.uniform(0, 2), rng.uniform(0, 2));
  const auto base = error_summary(pairs, "x");
  for (int t = 0; t < 20; ++t) {
    rng.shuffle(std::span<std::pair<double, double>>(pairs));
    const auto s = error_summary(pairs, "x");
    EXPECT_NEAR(s.mean_abs_error, base.mean_abs_error, 1e-15);
    EXPECT_EQ(s.median_abs_error, base.median_abs_error);
  }
}

TEST(ErrorSummary, ScalesWithPositiveFactor) {
  Rng rng(4);
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 30; ++i) pairs.emplace_back(rng.uniform(0, 2), rng.uniform(0, 2));
  const auto base = error_summary(pairs, "x");
  for (double c : {0.5, 2.0, 8.0, 3.7}) {
    auto scaled = pairs;
    for (auto& [p, a] : scaled) {
      p *= c;
      a *= c;
    }
    const auto s = error_summary(scaled, "x");
    EXPECT_NEAR(s.mean_abs_error, c * base.mean_abs_error, 1e-12 * c);
    EXPECT_NEAR(s.median_abs_error, c * base.median_abs_error, 1e-12 * c);
  }
}

TEST(CompareAll, ModelPerfectBaselinesWithGaps) {
  std::vector<ActualPpg> actuals;
  ModelPredictions model{"mlp", {}};
  BaselineMap baselines;
  for (int i = 0; i < 120; ++i) {
    const std::string id = "p" + std::to_string(1000 + i);
    const double v = 0.2 + 0.01 * i;
    actuals.push_back({id, v});
    model.by_player[id] = v;
    baselines[{id, BaselineSource::kNhl}] = v + 0.1;
    if (i % 10 != 0) baselines[{id, BaselineSource::kTsn}] = v - 0.2;
  }
  const auto out = compare_all(model, baselines, actuals, 100);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].source, "mlp");
  EXPECT_EQ(out[0].mean_abs_error, 0.0);
  EXPECT_EQ(out[0].n, 100u);
  EXPECT_EQ(out[1].source, "tsn");
  EXPECT_EQ(out[1].n, 90u);
  EXPECT_NEAR(out[1].mean_abs_error, 0.2, 1e-12);
  EXPECT_EQ(out[2].source, "nhl");
  EXPECT_EQ(out[2].n, 100u);
  EXPECT_NEAR(out[2].median_abs_error, 0.1, 1e-12);
}

TEST(CompareAll, SingleSourceSinglePlayer) {
  const auto out = compare_all(ModelPredictions{"linear", {{"a", 0.7}}}, {}, {{"a", 1.0}}, 100);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0].mean_abs_error, 0.3, 1e-15);
  EXPECT_EQ(out[0].median_abs_error, out[0].mean_abs_error);
}

TEST(CompareAll, MissingModelPredictionListsPlayers) {
  try {
    compare_all(ModelPredictions{"knn", {{"a", 1.0}}}, {}, {{"a", 1.0}, {"b", 2.0}, {"c", 3.0}}, 10);
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("b"), std::string::npos);
    EXPECT_NE(msg.find("c"), std::string::npos);
  }
  // Players outside the top n need no prediction.
  EXPECT_NO_THROW(compare_all(ModelPredictions{"knn", {{"c", 1.0}}}, {}, {{"a", 1.0}, {"c", 3.0}}, 1));
}

TEST(Curves, Shapes) {
  const std::vector<ActualPpg> actuals = {{"a", 1.0}, {"b", 0.8}, {"c", 1.4}};
  ModelPredictions model{"tree", {{"a", 1.0}, {"b", 0.8}, {"c", 1.4}}};
  BaselineMap baselines{{{"a", BaselineSource::kTsn}, 0.9}};
  const auto one = emit_curves(model, baselines, actuals, 1);
  for (const auto& s : one) EXPECT_EQ(s.points.size(), 1u);

  const auto all = emit_curves(model, baselines, actuals, 3);
  ASSERT_EQ(all.size(), 2u);
  for (const auto& s : all) {
    for (std::size_t i = 0; i < s.points.size(); ++i) EXPECT_EQ(s.points[i].rank, i + 1);
  }
  for (const auto& p : all[0].points) EXPECT_EQ(*p.predicted_ppg, p.actual_ppg);
  EXPECT_EQ(all[1].source, "tsn");
  EXPECT_FALSE(all[1].points[0].predicted_ppg.has_value());
  EXPECT_EQ(*all[1].points[1].predicted_ppg, 0.9);
  EXPECT_EQ(all[0].points[0].player_id, "c");
}
