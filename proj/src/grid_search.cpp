#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "puckpar/metrics.hpp"
#include "puckpar/models.hpp"

namespace puckpar {

std::vector<Hyperparams> default_grid(ModelKind kind, std::size_t train_rows) {
  std::vector<Hyperparams> grid;
  const std::vector<std::optional<std::size_t>> tree_depths = {2, 4, 6, 8, 10, std::nullopt};
  switch (kind) {
    case ModelKind::kLinear:
      for (double lambda : {0.0, 1e-3, 1e-2, 1e-1, 1.0}) grid.emplace_back(LinearHyper{lambda});
      break;
    case ModelKind::kKnn:
      for (std::size_t k : {1, 3, 5, 7, 9, 15, 25}) {
        if (k > train_rows) continue;
        for (auto w : {KnnWeighting::kUniform, KnnWeighting::kInverseDistance}) grid.emplace_back(KnnHyper{k, w});
      }
      break;
    case ModelKind::kTree:
      for (const auto& depth : tree_depths) {
        for (std::size_t leaf : {1, 5, 10, 20}) grid.emplace_back(TreeHyper{depth, leaf});
      }
      break;
    case ModelKind::kForest:
      for (std::size_t trees : {50, 100, 200}) {
        for (std::optional<std::size_t> depth : {std::optional<std::size_t>(4), std::optional<std::size_t>(8),
                                                 std::optional<std::size_t>()}) {
          for (auto mf : {MaxFeatures::kAll, MaxFeatures::kSqrt}) {
            ForestHyper h;
            h.trees = trees;
            h.max_depth = depth;
            h.max_features = mf;
            grid.emplace_back(h);
          }
        }
      }
      break;
    case ModelKind::kMlp:
      for (const std::vector<std::size_t>& hidden :
           {std::vector<std::size_t>{16}, std::vector<std::size_t>{32}, std::vector<std::size_t>{32, 16}}) {
        for (double lr : {1e-3, 1e-2}) {
          MlpHyper h;
          h.hidden = hidden;
          h.learning_rate = lr;
          grid.emplace_back(h);
        }
      }
      break;
  }
  return grid;
}

namespace {

struct Evaluated {
  CandidateResult result;
  std::optional<FittedModel> model;
};

Evaluated evaluate_candidate(const RegressorSpec& spec, const Dataset& dataset, const Matrix& train_x,
                             const std::vector<double>& train_y, const Matrix& val_x, const std::vector<double>& val_y,
                             const Matrix& test_x, const std::vector<double>& test_y) {
  Evaluated out;
  out.result.spec = spec;
  FitOptions options;
  options.scaler = dataset.scaler;
  options.validation_features = &val_x;
  options.validation_labels = val_y;
  try {
    FittedModel model = fit(spec, train_x, train_y, options);
    out.result.validation_mae = mean_absolute_error(predict(model, val_x), val_y);
    out.result.test_mae = test_x.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : mean_absolute_error(predict(model, test_x), test_y);
    out.model = std::move(model);
  } catch (const TrainingDivergedError& e) {
    spdlog::warn("{} [{}] diverged: {}", to_string(spec.kind()), spec.hyper.to_string(), e.what());
    out.result.diverged = true;
    out.result.validation_mae = std::numeric_limits<double>::infinity();
    out.result.test_mae = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace

KindSearch grid_search(ModelKind kind, const std::vector<Hyperparams>& grid, const Dataset& dataset,
                       unsigned threads) {
  if (grid.empty()) throw ValidationError(fmt::format("empty grid for model kind '{}'", to_string(kind)));
  for (const auto& h : grid) {
    if (h.kind() != kind) {
      throw ValidationError(fmt::format("grid for '{}' contains a '{}' entry", to_string(kind), to_string(h.kind())));
    }
  }

  const Matrix train_x = dataset.features_of(Split::kTrain);
  const auto train_y = dataset.labels_of(Split::kTrain);
  const Matrix val_x = dataset.features_of(Split::kValidation);
  const auto val_y = dataset.labels_of(Split::kValidation);
  const Matrix test_x = dataset.features_of(Split::kTest);
  const auto test_y = dataset.labels_of(Split::kTest);
  if (val_x.empty()) throw ValidationError("grid search needs a non-empty validation split");

  std::vector<Evaluated> evaluated(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        evaluated[i] = evaluate_candidate(RegressorSpec{grid[i], dataset.seed}, dataset, train_x, train_y, val_x,
                                          val_y, test_x, test_y);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  KindSearch search;
  search.kind = kind;
  std::optional<std::size_t> winner;
  for (std::size_t i = 0; i < evaluated.size(); ++i) {
    search.candidates.push_back(evaluated[i].result);
    if (evaluated[i].result.diverged) continue;
    if (!winner || evaluated[i].result.validation_mae < evaluated[*winner].result.validation_mae) winner = i;
  }
  if (!winner) throw TrainingDivergedError(fmt::format("every '{}' candidate diverged", to_string(kind)));
  search.winner = *winner;
  search.winner_model = std::move(*evaluated[*winner].model);
  spdlog::info("{}: best [{}] validation MAE {:.6f}", to_string(kind), search.best().spec.hyper.to_string(),
               search.best().validation_mae);
  return search;
}

std::vector<std::pair<std::size_t, std::size_t>> rank_candidates(const std::vector<KindSearch>& kinds) {
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    for (std::size_t c = 0; c < kinds[k].candidates.size(); ++c) order.emplace_back(k, c);
  }
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    const double ma = kinds[a.first].candidates[a.second].validation_mae;
    const double mb = kinds[b.first].candidates[b.second].validation_mae;
    if (ma != mb) return ma < mb;
    const int ra = selection_rank(kinds[a.first].kind);
    const int rb = selection_rank(kinds[b.first].kind);
    if (ra != rb) return ra < rb;
    return a.second < b.second;
  });
  return order;
}

GridSearchReport search_all(const Dataset& dataset, unsigned threads) {
  GridSearchReport report;
  const std::size_t train_rows = dataset.indices(Split::kTrain).size();
  for (ModelKind kind : kAllModelKinds) {
    report.kinds.push_back(grid_search(kind, default_grid(kind, train_rows), dataset, threads));
  }
  report.ranking = rank_candidates(report.kinds);
  return report;
}

ModelKind select_kind(const std::vector<std::pair<ModelKind, double>>& scores) {
  for (ModelKind kind : kAllModelKinds) {
    const auto count = std::count_if(scores.begin(), scores.end(), [&](const auto& s) { return s.first == kind; });
    if (count == 0) throw ValidationError(fmt::format("model selection is missing kind '{}'", to_string(kind)));
    if (count > 1) throw ValidationError(fmt::format("model selection has kind '{}' twice", to_string(kind)));
  }
  const auto* best = &scores.front();
  for (const auto& s : scores) {
    if (s.second < best->second || (s.second == best->second && selection_rank(s.first) < selection_rank(best->first))) {
      best = &s;
    }
  }
  return best->first;
}

const FittedModel& select_model(const std::vector<KindSearch>& kinds) {
  std::vector<std::pair<ModelKind, double>> scores;
  for (const auto& k : kinds) scores.emplace_back(k.kind, k.best().validation_mae);
  const ModelKind chosen = select_kind(scores);
  for (const auto& k : kinds) {
    if (k.kind == chosen) return k.winner_model;
  }
  throw Error("selected kind not found");
}

}  // namespace puckpar
