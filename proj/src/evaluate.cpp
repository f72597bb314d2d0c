#include "puckpar/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "puckpar/metrics.hpp"

namespace puckpar {

std::vector<ActualPpg> top_n_by_actual(std::vector<ActualPpg> pool, std::size_t n) {
  if (n == 0) throw ValidationError("top-n selection needs n >= 1");
  std::sort(pool.begin(), pool.end(), [](const ActualPpg& a, const ActualPpg& b) {
    if (a.ppg != b.ppg) return a.ppg > b.ppg;
    return a.player_id < b.player_id;
  });
  if (pool.size() > n) pool.resize(n);
  return pool;
}

ErrorSummary error_summary(std::span<const std::pair<double, double>> pairs, std::string source) {
  if (pairs.empty()) throw ValidationError(fmt::format("no pairs to score for source '{}'", source));
  std::vector<double> errors;
  errors.reserve(pairs.size());
  double sum = 0;
  for (const auto& [predicted, actual] : pairs) {
    const double e = std::abs(predicted - actual);
    errors.push_back(e);
    sum += e;
  }
  ErrorSummary s;
  s.source = std::move(source);
  s.n = pairs.size();
  s.mean_abs_error = sum / static_cast<double>(pairs.size());
  s.median_abs_error = median(std::move(errors));
  return s;
}

namespace {

const std::vector<BaselineSource> kBaselineOrder = {BaselineSource::kTsn, BaselineSource::kNhl};

std::vector<ActualPpg> checked_top(const ModelPredictions& model, const std::vector<ActualPpg>& actuals,
                                   std::size_t n) {
  auto top = top_n_by_actual(actuals, n);
  std::vector<std::string> missing;
  for (const auto& p : top) {
    if (!model.by_player.contains(p.player_id)) missing.push_back(p.player_id);
  }
  if (!missing.empty()) {
    throw ValidationError(fmt::format("model '{}' has no prediction for: {}", model.source, fmt::join(missing, ", ")));
  }
  return top;
}

}  // namespace

std::vector<ErrorSummary> compare_all(const ModelPredictions& model, const BaselineMap& baselines,
                                      const std::vector<ActualPpg>& actuals, std::size_t n) {
  const auto top = checked_top(model, actuals, n);
  std::vector<ErrorSummary> out;

  std::vector<std::pair<double, double>> pairs;
  for (const auto& p : top) pairs.emplace_back(model.by_player.at(p.player_id), p.ppg);
  if (!pairs.empty()) out.push_back(error_summary(pairs, model.source));

  for (BaselineSource source : kBaselineOrder) {
    pairs.clear();
    for (const auto& p : top) {
      auto it = baselines.find({p.player_id, source});
      if (it != baselines.end()) pairs.emplace_back(it->second, p.ppg);
    }
    if (!pairs.empty()) out.push_back(error_summary(pairs, std::string(to_string(source))));
  }
  return out;
}

std::vector<CurveSeries> emit_curves(const ModelPredictions& model, const BaselineMap& baselines,
                                     const std::vector<ActualPpg>& actuals, std::size_t n) {
  const auto top = checked_top(model, actuals, n);
  std::vector<CurveSeries> out;

  CurveSeries series{model.source, {}};
  for (std::size_t i = 0; i < top.size(); ++i) {
    series.points.push_back({i + 1, top[i].player_id, top[i].ppg, model.by_player.at(top[i].player_id)});
  }
  out.push_back(std::move(series));

  for (BaselineSource source : kBaselineOrder) {
    CurveSeries b{std::string(to_string(source)), {}};
    bool any = false;
    for (std::size_t i = 0; i < top.size(); ++i) {
      CurvePoint point{i + 1, top[i].player_id, top[i].ppg, std::nullopt};
      auto it = baselines.find({top[i].player_id, source});
      if (it != baselines.end()) {
        point.predicted_ppg = it->second;
        any = true;
      }
      b.points.push_back(std::move(point));
    }
    if (any) out.push_back(std::move(b));
  }
  return out;
}

}  // namespace puckpar
