#include "puckpar/domain.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace puckpar {

void validate(const SkaterRecord& r) {
  auto fail = [&](std::string_view what) {
    throw ValidationError(fmt::format("skater '{}': {}", r.player_id, what));
  };
  if (r.player_id.empty()) throw ValidationError("skater with empty player_id");
  if (!(std::isfinite(r.height_cm) && r.height_cm > 0)) fail("height_cm must be positive");
  if (!(std::isfinite(r.weight_kg) && r.weight_kg > 0)) fail("weight_kg must be positive");
  if (!(r.toi_per_game > 0 && r.toi_per_game <= 60)) fail("toi_per_game must be in (0, 60]");
  if (!(r.shooting_pct >= 0 && r.shooting_pct <= 1)) fail("shooting_pct must be a fraction in [0, 1]");
  if (r.games_played < 0) fail("games_played must be non-negative");
  if (r.goals < 0) fail("goals must be non-negative");
  if (r.assists < 0) fail("assists must be non-negative");
}

PpgLabel ppg(const SkaterRecord& record) {
  if (record.games_played < 1) {
    throw UndefinedLabelError(
        fmt::format("points per game undefined for '{}': no games played", record.player_id));
  }
  return PpgLabel(static_cast<double>(record.goals + record.assists) /
                  static_cast<double>(record.games_played));
}

void validate(const TeamForm& f) {
  if (f.team_id.empty()) throw ValidationError("team with empty team_id");
  if (!(f.ppcg_season > 0 && f.ppcg_season <= 1)) {
    throw ValidationError(fmt::format("team '{}': ppcg_season {} outside (0, 1]", f.team_id, f.ppcg_season));
  }
  if (!(f.ppcg_recent >= 0 && f.ppcg_recent <= 1)) {
    throw ValidationError(fmt::format("team '{}': ppcg_recent {} outside [0, 1]", f.team_id, f.ppcg_recent));
  }
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLinear: return "linear";
    case ModelKind::kKnn: return "knn";
    case ModelKind::kTree: return "tree";
    case ModelKind::kForest: return "forest";
    case ModelKind::kMlp: return "mlp";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  for (ModelKind k : kAllModelKinds) {
    if (to_string(k) == text) return k;
  }
  throw ValidationError(fmt::format("unknown model kind '{}'", text));
}

int selection_rank(ModelKind kind) {
  for (std::size_t i = 0; i < kSelectionOrder.size(); ++i) {
    if (kSelectionOrder[i] == kind) return static_cast<int>(i);
  }
  return static_cast<int>(kSelectionOrder.size());
}

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ValidationError(fmt::format("invalid value '{}' for hyperparameter '{}'", value, key));
}

double parse_double(std::string_view key, const std::string& value) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) bad_value(key, value);
  return out;
}

std::size_t parse_count(std::string_view key, const std::string& value) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

std::optional<std::size_t> parse_depth(std::string_view key, const std::string& value) {
  if (value == "none") return std::nullopt;
  return parse_count(key, value);
}

std::string depth_string(const std::optional<std::size_t>& d) {
  return d ? std::to_string(*d) : std::string("none");
}

std::vector<std::size_t> parse_hidden(std::string_view key, const std::string& value) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto dash = value.find('-', start);
    if (dash == std::string::npos) dash = value.size();
    out.push_back(parse_count(key, value.substr(start, dash - start)));
    start = dash + 1;
  }
  return out;
}

std::string hidden_string(const std::vector<std::size_t>& hidden) {
  std::string out;
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(hidden[i]);
  }
  return out;
}

std::string real_string(double v) { return fmt::format("{}", v); }

void check_keys(ModelKind kind, const HyperMap& values, std::initializer_list<std::string_view> legal) {
  for (const auto& [key, _] : values) {
    bool ok = false;
    for (auto l : legal) ok = ok || key == l;
    if (!ok) {
      throw ValidationError(
          fmt::format("hyperparameter '{}' is not legal for model kind '{}'", key, to_string(kind)));
    }
  }
}

template <typename F>
void with_key(const HyperMap& values, std::string_view key, F&& apply) {
  auto it = values.find(std::string(key));
  if (it != values.end()) apply(it->second);
}

}  // namespace

Hyperparams::Hyperparams(LinearHyper h) : value_(h) {
  if (!(std::isfinite(h.lambda) && h.lambda >= 0)) throw ValidationError("linear: lambda must be non-negative");
}

Hyperparams::Hyperparams(KnnHyper h) : value_(h) {
  if (h.k < 1) throw ValidationError("knn: k must be at least 1");
}

Hyperparams::Hyperparams(TreeHyper h) : value_(h) {
  if (h.min_samples_leaf < 1) throw ValidationError("tree: min_samples_leaf must be at least 1");
}

Hyperparams::Hyperparams(ForestHyper h) : value_(h) {
  if (h.trees < 1) throw ValidationError("forest: trees must be at least 1");
  if (h.min_samples_leaf < 1) throw ValidationError("forest: min_samples_leaf must be at least 1");
}

Hyperparams::Hyperparams(MlpHyper h) : value_(std::move(h)) {
  const auto& m = std::get<MlpHyper>(value_);
  if (m.hidden.empty()) throw ValidationError("mlp: at least one hidden layer is required");
  for (auto width : m.hidden) {
    if (width < 1) throw ValidationError("mlp: hidden layer widths must be positive");
  }
  if (!(m.learning_rate > 0)) throw ValidationError("mlp: learning_rate must be positive");
  if (!(m.momentum >= 0 && m.momentum < 1)) throw ValidationError("mlp: momentum must be in [0, 1)");
  if (m.batch_size < 1) throw ValidationError("mlp: batch_size must be at least 1");
  if (m.max_epochs < 1) throw ValidationError("mlp: max_epochs must be at least 1");
  if (!(m.min_delta >= 0)) throw ValidationError("mlp: min_delta must be non-negative");
}

Hyperparams Hyperparams::from_map(ModelKind kind, const HyperMap& values) {
  switch (kind) {
    case ModelKind::kLinear: {
      check_keys(kind, values, {"lambda"});
      LinearHyper h;
      with_key(values, "lambda", [&](const std::string& v) { h.lambda = parse_double("lambda", v); });
      return Hyperparams(h);
    }
    case ModelKind::kKnn: {
      check_keys(kind, values, {"k", "weighting"});
      KnnHyper h;
      with_key(values, "k", [&](const std::string& v) { h.k = parse_count("k", v); });
      with_key(values, "weighting", [&](const std::string& v) {
        if (v == "uniform") h.weighting = KnnWeighting::kUniform;
        else if (v == "distance") h.weighting = KnnWeighting::kInverseDistance;
        else bad_value("weighting", v);
      });
      return Hyperparams(h);
    }
    case ModelKind::kTree: {
      check_keys(kind, values, {"max_depth", "min_samples_leaf"});
      TreeHyper h;
      with_key(values, "max_depth", [&](const std::string& v) { h.max_depth = parse_depth("max_depth", v); });
      with_key(values, "min_samples_leaf",
               [&](const std::string& v) { h.min_samples_leaf = parse_count("min_samples_leaf", v); });
      return Hyperparams(h);
    }
    case ModelKind::kForest: {
      check_keys(kind, values, {"trees", "max_depth", "min_samples_leaf", "max_features", "bootstrap"});
      ForestHyper h;
      with_key(values, "trees", [&](const std::string& v) { h.trees = parse_count("trees", v); });
      with_key(values, "max_depth", [&](const std::string& v) { h.max_depth = parse_depth("max_depth", v); });
      with_key(values, "min_samples_leaf",
               [&](const std::string& v) { h.min_samples_leaf = parse_count("min_samples_leaf", v); });
      with_key(values, "max_features", [&](const std::string& v) {
        if (v == "all") h.max_features = MaxFeatures::kAll;
        else if (v == "sqrt") h.max_features = MaxFeatures::kSqrt;
        else bad_value("max_features", v);
      });
      with_key(values, "bootstrap", [&](const std::string& v) {
        if (v == "true") h.bootstrap = true;
        else if (v == "false") h.bootstrap = false;
        else bad_value("bootstrap", v);
      });
      return Hyperparams(h);
    }
    case ModelKind::kMlp: {
      check_keys(kind, values,
                 {"hidden", "learning_rate", "momentum", "batch_size", "max_epochs", "patience", "min_delta"});
      MlpHyper h;
      with_key(values, "hidden", [&](const std::string& v) { h.hidden = parse_hidden("hidden", v); });
      with_key(values, "learning_rate",
               [&](const std::string& v) { h.learning_rate = parse_double("learning_rate", v); });
      with_key(values, "momentum", [&](const std::string& v) { h.momentum = parse_double("momentum", v); });
      with_key(values, "batch_size", [&](const std::string& v) { h.batch_size = parse_count("batch_size", v); });
      with_key(values, "max_epochs", [&](const std::string& v) { h.max_epochs = parse_count("max_epochs", v); });
      with_key(values, "patience", [&](const std::string& v) { h.patience = parse_count("patience", v); });
      with_key(values, "min_delta", [&](const std::string& v) { h.min_delta = parse_double("min_delta", v); });
      return Hyperparams(std::move(h));
    }
  }
  throw ValidationError("unknown model kind");
}

ModelKind Hyperparams::kind() const {
  return static_cast<ModelKind>(value_.index());
}

HyperMap Hyperparams::to_map() const {
  struct Visitor {
    HyperMap operator()(const LinearHyper& h) const { return {{"lambda", real_string(h.lambda)}}; }
    HyperMap operator()(const KnnHyper& h) const {
      return {{"k", std::to_string(h.k)},
              {"weighting", h.weighting == KnnWeighting::kUniform ? "uniform" : "distance"}};
    }
    HyperMap operator()(const TreeHyper& h) const {
      return {{"max_depth", depth_string(h.max_depth)}, {"min_samples_leaf", std::to_string(h.min_samples_leaf)}};
    }
    HyperMap operator()(const ForestHyper& h) const {
      return {{"trees", std::to_string(h.trees)},
              {"max_depth", depth_string(h.max_depth)},
              {"min_samples_leaf", std::to_string(h.min_samples_leaf)},
              {"max_features", h.max_features == MaxFeatures::kAll ? "all" : "sqrt"},
              {"bootstrap", h.bootstrap ? "true" : "false"}};
    }
    HyperMap operator()(const MlpHyper& h) const {
      return {{"hidden", hidden_string(h.hidden)},
              {"learning_rate", real_string(h.learning_rate)},
              {"momentum", real_string(h.momentum)},
              {"batch_size", std::to_string(h.batch_size)},
              {"max_epochs", std::to_string(h.max_epochs)},
              {"patience", std::to_string(h.patience)},
              {"min_delta", real_string(h.min_delta)}};
    }
  };
  return std::visit(Visitor{}, value_);
}

std::string Hyperparams::to_string() const {
  std::string out;
  for (const auto& [key, value] : to_map()) {
    if (!out.empty()) out += ';';
    out += key;
    out += '=';
    out += value;
  }
  return out;
}

}  // namespace puckpar
