#include "puckpar/persist.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace puckpar {

using nlohmann::json;

namespace {

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

Matrix matrix_from(const json& j) {
  return Matrix::from_rows(j.get<std::vector<std::vector<double>>>());
}

json tree_json(const TreeModel& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
  return json{{"n_features", tree.n_features}, {"nodes", std::move(nodes)}};
}

TreeModel tree_from(const json& j) {
  TreeModel tree;
  tree.n_features = j.at("n_features").get<std::size_t>();
  for (const auto& n : j.at("nodes")) {
    if (!n.is_array() || n.size() != 5) throw ValidationError("tree node must be [feature, threshold, left, right, value]");
    tree.nodes.push_back(TreeNode{n[0].get<int>(), n[1].get<double>(), n[2].get<int>(), n[3].get<int>(),
                                  n[4].get<double>()});
  }
  return tree;
}

json parameters_json(const ModelParameters& parameters) {
  struct Visitor {
    json operator()(const LinearModel& m) const {
      return json{{"coefficients", m.coefficients}, {"intercept", m.intercept}};
    }
    json operator()(const KnnModel& m) const {
      return json{{"features", matrix_json(m.features)}, {"labels", m.labels}};
    }
    json operator()(const TreeModel& m) const { return tree_json(m); }
    json operator()(const ForestModel& m) const {
      json trees = json::array();
      for (const auto& t : m.trees) trees.push_back(tree_json(t));
      return json{{"trees", std::move(trees)}, {"tree_seeds", m.tree_seeds}};
    }
    json operator()(const MlpNetwork& m) const {
      json weights = json::array();
      json biases = json::array();
      for (std::size_t l = 0; l < m.weights.size(); ++l) {
        const auto& w = m.weights[l];
        weights.push_back(std::vector<double>(w.data(), w.data() + w.size()));
        const auto& b = m.biases[l];
        biases.push_back(std::vector<double>(b.data(), b.data() + b.size()));
      }
      return json{{"layer_sizes", m.layer_sizes}, {"weights", std::move(weights)}, {"biases", std::move(biases)}};
    }
  };
  return std::visit(Visitor{}, parameters);
}

ModelParameters parameters_from(ModelKind kind, const json& j) {
  if (!j.is_object()) throw ValidationError("parameters must be an object");
  switch (kind) {
    case ModelKind::kLinear:
      return LinearModel{j.at("coefficients").get<std::vector<double>>(), j.at("intercept").get<double>()};
    case ModelKind::kKnn:
      return KnnModel{matrix_from(j.at("features")), j.at("labels").get<std::vector<double>>()};
    case ModelKind::kTree:
      return tree_from(j);
    case ModelKind::kForest: {
      ForestModel forest;
      for (const auto& t : j.at("trees")) forest.trees.push_back(tree_from(t));
      forest.tree_seeds = j.at("tree_seeds").get<std::vector<std::uint64_t>>();
      if (forest.tree_seeds.size() != forest.trees.size()) {
        throw ValidationError("forest: tree_seeds and trees differ in length");
      }
      return forest;
    }
    case ModelKind::kMlp: {
      MlpNetwork net = MlpNetwork::zeros(j.at("layer_sizes").get<std::vector<std::size_t>>());
      const auto weights = j.at("weights").get<std::vector<std::vector<double>>>();
      const auto biases = j.at("biases").get<std::vector<std::vector<double>>>();
      if (weights.size() != net.weights.size() || biases.size() != net.biases.size()) {
        throw ValidationError("mlp: layer count does not match layer_sizes");
      }
      for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].size() != static_cast<std::size_t>(net.weights[l].size()) ||
            biases[l].size() != static_cast<std::size_t>(net.biases[l].size())) {
          throw ValidationError(fmt::format("mlp: layer {} payload has the wrong size", l));
        }
        std::copy(weights[l].begin(), weights[l].end(), net.weights[l].data());
        std::copy(biases[l].begin(), biases[l].end(), net.biases[l].data());
      }
      return net;
    }
  }
  throw ValidationError("unknown model kind");
}

}  // namespace

std::string archive_text(const FittedModel& model) {
  json meta{{"epochs_run", model.meta.epochs_run}};
  meta["final_training_loss"] = model.meta.final_training_loss ? json(*model.meta.final_training_loss) : json(nullptr);

  json doc;
  doc["schema_version"] = kArchiveSchemaVersion;
  doc["model_kind"] = std::string(to_string(model.kind()));
  doc["hyperparams"] = model.spec.hyper.to_map();
  doc["seed"] = model.spec.seed;
  doc["scaler"] = json{{"mean", model.scaler.mean()}, {"std", model.scaler.stddev()}};
  doc["parameters"] = parameters_json(model.parameters);
  doc["training_meta"] = std::move(meta);
  return doc.dump(2) + "\n";
}

FittedModel parse_archive(std::string_view text, std::string_view source_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("{}: malformed model archive: {}", source_name, e.what()));
  }

  try {
    if (!doc.is_object()) throw ValidationError("archive must be a JSON object");
    const int version = doc.at("schema_version").get<int>();
    if (version != kArchiveSchemaVersion) {
      throw UnsupportedVersionError(
          fmt::format("{}: unsupported schema_version {} (expected {})", source_name, version, kArchiveSchemaVersion));
    }
    const auto kind_name = doc.at("model_kind").get<std::string>();
    const ModelKind kind = parse_model_kind(kind_name);
    RegressorSpec spec{Hyperparams::from_map(kind, doc.at("hyperparams").get<HyperMap>()),
                       doc.at("seed").get<std::uint64_t>()};
    const auto& s = doc.at("scaler");
    Scaler scaler(s.at("mean").get<std::vector<double>>(), s.at("std").get<std::vector<double>>());

    TrainingMeta meta;
    if (doc.contains("training_meta")) {
      const auto& m = doc["training_meta"];
      meta.epochs_run = m.value("epochs_run", std::size_t{0});
      if (m.contains("final_training_loss") && !m["final_training_loss"].is_null()) {
        meta.final_training_loss = m["final_training_loss"].get<double>();
      }
    }
    return make_model(std::move(spec), std::move(scaler), parameters_from(kind, doc.at("parameters")), meta);
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("{}: invalid model archive: {}", source_name, e.what()));
  } catch (const ShapeError& e) {
    throw ValidationError(fmt::format("{}: invalid model archive: {}", source_name, e.what()));
  } catch (const UnsupportedVersionError&) {
    throw;
  } catch (const InputError& e) {
    throw ValidationError(fmt::format("{}: {}", source_name, e.what()));
  }
}

void save(const FittedModel& model, const std::filesystem::path& path) {
  const std::string text = archive_text(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot write model archive '{}'", path.string()));
  out << text;
  out.flush();
  if (!out) throw InputError(fmt::format("failed writing model archive '{}'", path.string()));
}

FittedModel load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError(fmt::format("cannot open model archive '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_archive(buffer.str(), path.string());
}

}  // namespace puckpar
