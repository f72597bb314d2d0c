#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "puckpar/error.hpp"

namespace puckpar {

inline constexpr std::size_t kFeatureCount = 4;

// Feature order is part of every contract: training, persistence and
// prediction all use [height, weight, toi_per_game, shooting_pct].
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "height_cm", "weight_kg", "toi_per_game", "shooting_pct"};

using FeatureVector = std::array<double, kFeatureCount>;

struct SkaterRecord {
  std::string player_id;
  std::string name;
  std::string team_id;
  std::string season;
  double height_cm = 0.0;
  double weight_kg = 0.0;
  double toi_per_game = 0.0;
  double shooting_pct = 0.0;
  std::int64_t games_played = 0;
  std::int64_t goals = 0;
  std::int64_t assists = 0;

  FeatureVector features() const { return {height_cm, weight_kg, toi_per_game, shooting_pct}; }
};

// Throws ValidationError naming the first violated field. games_played == 0
// is legal here; it only disqualifies the record from labelled datasets.
void validate(const SkaterRecord& record);

// Points per game. Only ever produced by ppg() so the value cannot drift from
// the tallies it was derived from.
class PpgLabel {
 public:
  double value() const { return value_; }

 private:
  explicit PpgLabel(double v) : value_(v) {}
  double value_;
  friend PpgLabel ppg(const SkaterRecord& record);
};

// (goals + assists) / games_played. Throws UndefinedLabelError when no games
// have been played.
PpgLabel ppg(const SkaterRecord& record);

struct TeamForm {
  std::string team_id;
  double ppcg_season = 0.0;  // (0, 1]
  double ppcg_recent = 0.0;  // [0, 1], last 10 games
};

void validate(const TeamForm& form);

struct ParEntry {
  std::string player_id;
  std::string name;
  double ppg_predicted = 0.0;
  double ppg_actual = 0.0;
  double ppcg_season = 0.0;
  double ppcg_recent = 0.0;
  double par = 0.0;
};

enum class ModelKind { kLinear, kKnn, kTree, kForest, kMlp };

inline constexpr std::array<ModelKind, 5> kAllModelKinds = {
    ModelKind::kLinear, ModelKind::kKnn, ModelKind::kTree, ModelKind::kForest, ModelKind::kMlp};

// Tie-break order for model selection: earlier wins.
inline constexpr std::array<ModelKind, 5> kSelectionOrder = {
    ModelKind::kMlp, ModelKind::kForest, ModelKind::kTree, ModelKind::kKnn, ModelKind::kLinear};

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);  // throws ValidationError
int selection_rank(ModelKind kind);

// ---------------------------------------------------------------------------
// Hyperparameters. Each kind has a typed struct; the string map form is what
// appears in grid reports and model archives.

struct LinearHyper {
  double lambda = 0.0;
};

enum class KnnWeighting { kUniform, kInverseDistance };

struct KnnHyper {
  std::size_t k = 5;
  KnnWeighting weighting = KnnWeighting::kUniform;
};

struct TreeHyper {
  std::optional<std::size_t> max_depth;  // nullopt = unbounded
  std::size_t min_samples_leaf = 1;
};

enum class MaxFeatures { kAll, kSqrt };

struct ForestHyper {
  std::size_t trees = 100;
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::kAll;
  bool bootstrap = true;
};

struct MlpHyper {
  std::vector<std::size_t> hidden = {16};
  double learning_rate = 1e-2;
  double momentum = 0.9;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 2000;
  std::size_t patience = 50;
  double min_delta = 1e-5;
};

using HyperMap = std::map<std::string, std::string>;

class Hyperparams {
 public:
  using Variant = std::variant<LinearHyper, KnnHyper, TreeHyper, ForestHyper, MlpHyper>;

  Hyperparams() : value_(LinearHyper{}) {}
  Hyperparams(LinearHyper h);
  Hyperparams(KnnHyper h);
  Hyperparams(TreeHyper h);
  Hyperparams(ForestHyper h);
  Hyperparams(MlpHyper h);

  // Keys not listed for the kind, or unparsable values, throw ValidationError.
  // Keys left out keep their defaults.
  static Hyperparams from_map(ModelKind kind, const HyperMap& values);

  ModelKind kind() const;
  HyperMap to_map() const;
  // "key=value;key=value" in key order; stable across runs.
  std::string to_string() const;

  const Variant& value() const { return value_; }
  template <typename T>
  const T& as() const {
    return std::get<T>(value_);
  }

 private:
  Variant value_;
};

}  // namespace puckpar
