#include <gtest/gtest.h>

#include "puckpar/domain.hpp"

using namespace puckpar;

namespace {

SkaterRecord skater(std::int64_t goals, std::int64_t assists, std::int64_t games) {
  SkaterRecord r;
  r.player_id = "p1";
  r.name = "Test";
  r.team_id = "T";
  r.height_cm = 185;
  r.weight_kg = 90;
  r.toi_per_game = 17;
  r.shooting_pct = 0.1;
  r.games_played = games;
  r.goals = goals;
  r.assists = assists;
  return r;
}

}  // namespace

TEST(Ppg, ZeroPoints) { EXPECT_EQ(ppg(skater(0, 0, 82)).value(), 0.0); }

TEST(Ppg, PointPerGame) {
  EXPECT_EQ(ppg(skater(41, 41, 82)).value(), 1.0);
  EXPECT_EQ(ppg(skater(30, 40, 70)).value(), 1.0);
}

TEST(Ppg, NoGamesIsUndefined) { EXPECT_THROW(ppg(skater(1, 1, 0)), UndefinedLabelError); }

TEST(Ppg, ScaleFreeInGames) {
  for (std::int64_t g = 0; g < 30; ++g) {
    for (std::int64_t a = 0; a < 30; a += 7) {
      for (std::int64_t games = 1; games < 90; games += 11) {
        const double base = ppg(skater(g, a, games)).value();
        for (std::int64_t c : {2, 3, 7, 1000}) {
          EXPECT_DOUBLE_EQ(ppg(skater(c * g, c * a, c * games)).value(), base);
        }
      }
    }
  }
}

TEST(Validate, SkaterRanges) {
  EXPECT_NO_THROW(validate(skater(1, 1, 1)));
  auto r = skater(1, 1, 1);
  r.shooting_pct = 1.5;
  EXPECT_THROW(validate(r), ValidationError);
  r = skater(1, 1, 1);
  r.toi_per_game = 0;
  EXPECT_THROW(validate(r), ValidationError);
  r = skater(1, 1, 1);
  r.height_cm = -1;
  EXPECT_THROW(validate(r), ValidationError);
  r = skater(-1, 1, 1);
  EXPECT_THROW(validate(r), ValidationError);
}

TEST(Validate, TeamForm) {
  EXPECT_NO_THROW(validate(TeamForm{"A", 1.0, 0.0}));
  EXPECT_THROW(validate(TeamForm{"A", 0.0, 0.5}), ValidationError);
  EXPECT_THROW(validate(TeamForm{"A", 0.5, 1.01}), ValidationError);
}

TEST(ModelKindNames, RoundTrip) {
  for (auto kind : kAllModelKinds) EXPECT_EQ(parse_model_kind(to_string(kind)), kind);
  EXPECT_THROW(parse_model_kind("svm"), ValidationError);
  EXPECT_LT(selection_rank(ModelKind::kMlp), selection_rank(ModelKind::kForest));
  EXPECT_LT(selection_rank(ModelKind::kKnn), selection_rank(ModelKind::kLinear));
}

TEST(Hyperparams, MapRoundTripEveryKind) {
  ForestHyper f;
  f.trees = 50;
  f.max_depth = 8;
  f.max_features = MaxFeatures::kSqrt;
  MlpHyper m;
  m.hidden = {32, 16};
  m.learning_rate = 1e-3;
  const std::vector<Hyperparams> all = {LinearHyper{0.1}, KnnHyper{7, KnnWeighting::kInverseDistance},
                                        TreeHyper{std::nullopt, 5}, f, m};
  for (const auto& h : all) {
    const auto back = Hyperparams::from_map(h.kind(), h.to_map());
    EXPECT_EQ(back.to_map(), h.to_map());
    EXPECT_EQ(back.to_string(), h.to_string());
  }
  EXPECT_EQ(Hyperparams(m).to_map().at("hidden"), "32-16");
  EXPECT_EQ(Hyperparams(TreeHyper{}).to_map().at("max_depth"), "none");
}

TEST(Hyperparams, IllegalKeysRejected) {
  EXPECT_THROW(Hyperparams::from_map(ModelKind::kLinear, {{"k", "3"}}), ValidationError);
  EXPECT_THROW(Hyperparams::from_map(ModelKind::kKnn, {{"weighting", "cosine"}}), ValidationError);
  EXPECT_THROW(Hyperparams::from_map(ModelKind::kTree, {{"max_depth", "-2"}}), ValidationError);
  EXPECT_THROW(Hyperparams::from_map(ModelKind::kMlp, {{"hidden", ""}}), ValidationError);
  EXPECT_THROW(Hyperparams(LinearHyper{-1.0}), ValidationError);
  EXPECT_THROW(Hyperparams(KnnHyper{0}), ValidationError);
}

TEST(Hyperparams, MissingKeysKeepDefaults) {
  const auto h = Hyperparams::from_map(ModelKind::kKnn, {{"k", "3"}});
  EXPECT_EQ(h.as<KnnHyper>().k, 3u);
  EXPECT_EQ(h.as<KnnHyper>().weighting, KnnWeighting::kUniform);
  EXPECT_EQ(h.kind(), ModelKind::kKnn);
}
