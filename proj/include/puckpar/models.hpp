#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "puckpar/domain.hpp"
#include "puckpar/forest.hpp"
#include "puckpar/ingest.hpp"
#include "puckpar/knn.hpp"
#include "puckpar/linear.hpp"
#include "puckpar/matrix.hpp"
#include "puckpar/mlp.hpp"
#include "puckpar/tree.hpp"

namespace puckpar {

struct RegressorSpec {
  Hyperparams hyper;
  std::uint64_t seed = 0;

  ModelKind kind() const { return hyper.kind(); }
};

using ModelParameters = std::variant<LinearModel, KnnModel, TreeModel, ForestModel, MlpNetwork>;

struct TrainingMeta {
  std::size_t epochs_run = 0;
  std::optional<double> final_training_loss;  // mlp only
};

// A trained regressor together with the scaler its inputs must be
// standardized with. Immutable after fit; predict is pure.
struct FittedModel {
  RegressorSpec spec;
  Scaler scaler;
  ModelParameters parameters;
  TrainingMeta meta;

  ModelKind kind() const { return spec.kind(); }
  std::size_t feature_count() const;
};

struct FitOptions {
  // Recorded on the model; defaults to the identity of the feature width.
  std::optional<Scaler> scaler;
  // Used by the mlp for early stopping. Other kinds ignore it.
  const Matrix* validation_features = nullptr;
  std::span<const double> validation_labels;
};

// Fits the regressor described by `spec` on already standardized features.
// Deterministic in (spec, data, seed).
FittedModel fit(const RegressorSpec& spec, const Matrix& features, std::span<const double> labels,
                const FitOptions& options = {});

// Builds a model from parameters (used for hand-made and reloaded models).
// Throws ValidationError when the parameter type does not match the kind.
FittedModel make_model(RegressorSpec spec, Scaler scaler, ModelParameters parameters, TrainingMeta meta = {});

// Predicts from standardized features. Throws ShapeError on width mismatch.
std::vector<double> predict(const FittedModel& model, const Matrix& standardized);

// Applies the model's scaler first.
std::vector<double> predict_raw(const FittedModel& model, const Matrix& raw);

// ---------------------------------------------------------------------------
// Grid search and selection

struct CandidateResult {
  RegressorSpec spec;
  double validation_mae = 0.0;
  double test_mae = 0.0;
  bool diverged = false;  // mlp only; scored as +inf
};

struct KindSearch {
  ModelKind kind = ModelKind::kLinear;
  std::vector<CandidateResult> candidates;  // grid order
  std::size_t winner = 0;                   // index into candidates
  FittedModel winner_model;

  const CandidateResult& best() const { return candidates[winner]; }
};

// The hyperparameter grid searched for each kind. knn values of k larger
// than `train_rows` are left out.
std::vector<Hyperparams> default_grid(ModelKind kind, std::size_t train_rows);

// Fits every candidate on the training split and scores it by MAE on the
// validation split (test MAE is reported alongside, never used to choose).
// The lowest validation MAE wins; ties go to the earlier grid entry.
// Candidates may be evaluated on several threads; the result is identical
// to a sequential run. Throws ValidationError on an empty grid or a grid
// entry of another kind.
KindSearch grid_search(ModelKind kind, const std::vector<Hyperparams>& grid, const Dataset& dataset,
                       unsigned threads = 0);

struct GridSearchReport {
  std::vector<KindSearch> kinds;
  // (kind position in `kinds`, candidate index), best first.
  std::vector<std::pair<std::size_t, std::size_t>> ranking;
};

// Runs default grids for all five kinds.
GridSearchReport search_all(const Dataset& dataset, unsigned threads = 0);

// Orders every candidate by validation MAE, then kind selection order, then
// grid position.
std::vector<std::pair<std::size_t, std::size_t>> rank_candidates(const std::vector<KindSearch>& kinds);

// The kind with the lowest score; ties follow kSelectionOrder. Every kind
// must appear exactly once.
ModelKind select_kind(const std::vector<std::pair<ModelKind, double>>& scores);

// The per-kind winner with the globally lowest validation MAE.
const FittedModel& select_model(const std::vector<KindSearch>& kinds);

}  // namespace puckpar
