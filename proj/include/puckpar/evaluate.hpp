#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "puckpar/ingest.hpp"

namespace puckpar {

// A player with an observed points-per-game value.
struct ActualPpg {
  std::string player_id;
  double ppg = 0.0;
};

struct ErrorSummary {
  std::string source;  // model kind name, "tsn" or "nhl"
  double mean_abs_error = 0.0;
  double median_abs_error = 0.0;
  std::size_t n = 0;
};

struct CurvePoint {
  std::size_t rank = 0;  // 1-based
  std::string player_id;
  double actual_ppg = 0.0;
  std::optional<double> predicted_ppg;  // empty where a baseline has no value
};

struct CurveSeries {
  std::string source;
  std::vector<CurvePoint> points;
};

// Descending by actual PPG, ties by ascending player_id, truncated to n (or
// the whole pool when it is smaller). Throws ValidationError when n == 0.
std::vector<ActualPpg> top_n_by_actual(std::vector<ActualPpg> pool, std::size_t n);

// Mean and median of |predicted - actual| over (predicted, actual) pairs.
// Throws ValidationError on an empty list.
ErrorSummary error_summary(std::span<const std::pair<double, double>> pairs, std::string source);

// Predictions of one model, keyed by player_id.
struct ModelPredictions {
  std::string source;
  std::map<std::string, double> by_player;
};

// One summary for the model, then one per baseline source that has at least
// one top-n player. The model must cover every top-n player (ValidationError
// otherwise); baselines are scored over the players they cover.
std::vector<ErrorSummary> compare_all(const ModelPredictions& model, const BaselineMap& baselines,
                                      const std::vector<ActualPpg>& actuals, std::size_t n);

// Same selection as compare_all, as per-rank series for plotting. Every
// series has ranks 1..n; a baseline's missing players have no prediction.
// Baseline sources covering none of the top-n players are omitted.
std::vector<CurveSeries> emit_curves(const ModelPredictions& model, const BaselineMap& baselines,
                                     const std::vector<ActualPpg>& actuals, std::size_t n);

}  // namespace puckpar
