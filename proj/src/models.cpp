#include "puckpar/models.hpp"

#include <fmt/format.h>

namespace puckpar {

namespace {

std::size_t width_of(const ModelParameters& parameters) {
  struct Visitor {
    std::size_t operator()(const LinearModel& m) const { return m.coefficients.size(); }
    std::size_t operator()(const KnnModel& m) const { return m.features.cols(); }
    std::size_t operator()(const TreeModel& m) const { return m.n_features; }
    std::size_t operator()(const ForestModel& m) const {
      return m.trees.empty() ? 0 : m.trees.front().n_features;
    }
    std::size_t operator()(const MlpNetwork& m) const {
      return m.layer_sizes.empty() ? 0 : m.layer_sizes.front();
    }
  };
  return std::visit(Visitor{}, parameters);
}

}  // namespace

std::size_t FittedModel::feature_count() const { return width_of(parameters); }

FittedModel fit(const RegressorSpec& spec, const Matrix& features, std::span<const double> labels,
                const FitOptions& options) {
  if (features.rows() == 0) throw ValidationError("fit: no training rows");
  if (features.rows() != labels.size()) throw ShapeError("fit: feature rows and labels differ in length");

  FittedModel model;
  model.spec = spec;
  model.scaler = options.scaler ? *options.scaler : Scaler::identity(features.cols());
  if (model.scaler.width() != features.cols()) throw ShapeError("fit: scaler width differs from feature width");

  switch (spec.kind()) {
    case ModelKind::kLinear:
      model.parameters = fit_linear(spec.hyper.as<LinearHyper>(), features, labels);
      break;
    case ModelKind::kKnn:
      model.parameters = fit_knn(spec.hyper.as<KnnHyper>(), features, labels);
      break;
    case ModelKind::kTree:
      model.parameters = fit_tree(spec.hyper.as<TreeHyper>(), features, labels);
      break;
    case ModelKind::kForest:
      model.parameters = fit_forest(spec.hyper.as<ForestHyper>(), features, labels, spec.seed);
      break;
    case ModelKind::kMlp: {
      auto trained = train_mlp(spec.hyper.as<MlpHyper>(), features, labels, spec.seed, options.validation_features,
                               options.validation_labels);
      model.meta.epochs_run = trained.epochs_run;
      model.meta.final_training_loss = trained.final_training_loss;
      model.parameters = std::move(trained.network);
      break;
    }
  }
  return model;
}

FittedModel make_model(RegressorSpec spec, Scaler scaler, ModelParameters parameters, TrainingMeta meta) {
  if (static_cast<std::size_t>(spec.kind()) != parameters.index()) {
    throw ValidationError(fmt::format("parameters do not match model kind '{}'", to_string(spec.kind())));
  }
  if (const auto* net = std::get_if<MlpNetwork>(&parameters)) net->check();
  if (const auto* tree = std::get_if<TreeModel>(&parameters)) check_tree(*tree);
  if (const auto* forest = std::get_if<ForestModel>(&parameters)) {
    if (forest->trees.empty()) throw ValidationError("forest: no trees");
    for (const auto& t : forest->trees) {
      check_tree(t);
      if (t.n_features != forest->trees.front().n_features) throw ValidationError("forest: trees disagree on width");
    }
  }
  if (const auto* knn = std::get_if<KnnModel>(&parameters)) {
    if (knn->features.rows() != knn->labels.size()) throw ValidationError("knn: stored rows and labels differ");
    if (knn->features.rows() < spec.hyper.as<KnnHyper>().k) throw ValidationError("knn: fewer stored rows than k");
  }
  FittedModel model{std::move(spec), std::move(scaler), std::move(parameters), meta};
  if (model.scaler.width() != model.feature_count()) {
    throw ValidationError(
        fmt::format("scaler width {} differs from model width {}", model.scaler.width(), model.feature_count()));
  }
  return model;
}

std::vector<double> predict(const FittedModel& model, const Matrix& standardized) {
  const std::size_t width = model.feature_count();
  if (standardized.cols() != width && !standardized.empty()) {
    throw ShapeError(fmt::format("predict: model expects {} features, got {}", width, standardized.cols()));
  }
  struct Visitor {
    const FittedModel& model;
    const Matrix& x;
    std::vector<double> operator()(const LinearModel& m) const { return predict_linear(m, x); }
    std::vector<double> operator()(const KnnModel& m) const {
      return predict_knn(model.spec.hyper.as<KnnHyper>(), m, x);
    }
    std::vector<double> operator()(const TreeModel& m) const { return predict_tree(m, x); }
    std::vector<double> operator()(const ForestModel& m) const { return predict_forest(m, x); }
    std::vector<double> operator()(const MlpNetwork& m) const { return predict_mlp(m, x); }
  };
  return std::visit(Visitor{model, standardized}, model.parameters);
}

std::vector<double> predict_raw(const FittedModel& model, const Matrix& raw) {
  if (raw.empty()) return {};
  return predict(model, model.scaler.transform(raw));
}

}  // namespace puckpar
