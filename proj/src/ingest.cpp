#include "puckpar/ingest.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "puckpar/csv.hpp"
#include "puckpar/rng.hpp"

namespace puckpar {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

double real_field(const csv::Table::Row& row, std::size_t col, std::string_view column,
                  const std::string& source) {
  const std::string text = trimmed(row.fields[col]);
  double out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(out)) {
    throw ParseError(fmt::format("{}:{}: column '{}' is not a number: '{}'", source, row.line, column, text));
  }
  return out;
}

std::int64_t count_field(const csv::Table::Row& row, std::size_t col, std::string_view column,
                         const std::string& source) {
  const std::string text = trimmed(row.fields[col]);
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(fmt::format("{}:{}: column '{}' is not an integer: '{}'", source, row.line, column, text));
  }
  return out;
}

}  // namespace

SkaterLoad load_skaters(const std::filesystem::path& path) {
  const std::string source = path.string();
  const auto table = csv::read_file(path);
  const std::vector<std::string_view> columns = {"player_id",    "name",         "team_id",      "season",
                                                 "height_cm",    "weight_kg",    "toi_per_game", "shooting_pct",
                                                 "games_played", "goals",        "assists"};
  const auto col = csv::column_indices(table, columns, source);

  SkaterLoad out;
  out.records.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    SkaterRecord r;
    r.player_id = trimmed(row.fields[col[0]]);
    r.name = row.fields[col[1]];
    r.team_id = trimmed(row.fields[col[2]]);
    r.season = trimmed(row.fields[col[3]]);
    r.height_cm = real_field(row, col[4], columns[4], source);
    r.weight_kg = real_field(row, col[5], columns[5], source);
    r.toi_per_game = real_field(row, col[6], columns[6], source);
    r.shooting_pct = real_field(row, col[7], columns[7], source);
    r.games_played = count_field(row, col[8], columns[8], source);
    r.goals = count_field(row, col[9], columns[9], source);
    r.assists = count_field(row, col[10], columns[10], source);
    try {
      validate(r);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{}:{}: {}", source, row.line, e.what()));
    }
    if (r.games_played == 0) {
      auto msg = fmt::format("{}:{}: skipping '{}' with 0 games played", source, row.line, r.player_id);
      spdlog::warn("{}", msg);
      out.warnings.push_back(std::move(msg));
      continue;
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

std::map<std::string, TeamForm> load_team_forms(const std::filesystem::path& path) {
  const std::string source = path.string();
  const auto table = csv::read_file(path);
  const std::vector<std::string_view> columns = {"team_id", "ppcg_season", "ppcg_recent"};
  const auto col = csv::column_indices(table, columns, source);

  std::map<std::string, TeamForm> out;
  for (const auto& row : table.rows) {
    TeamForm f;
    f.team_id = trimmed(row.fields[col[0]]);
    f.ppcg_season = real_field(row, col[1], columns[1], source);
    f.ppcg_recent = real_field(row, col[2], columns[2], source);
    try {
      validate(f);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{}:{}: {}", source, row.line, e.what()));
    }
    if (out.contains(f.team_id)) {
      throw ValidationError(fmt::format("{}:{}: duplicate team_id '{}'", source, row.line, f.team_id));
    }
    out.emplace(f.team_id, std::move(f));
  }
  return out;
}

std::string_view to_string(BaselineSource source) {
  return source == BaselineSource::kTsn ? "tsn" : "nhl";
}

BaselineMap load_baselines(const std::filesystem::path& path) {
  const std::string source = path.string();
  const auto table = csv::read_file(path);
  const std::vector<std::string_view> columns = {"player_id", "source", "projected_ppg"};
  const auto col = csv::column_indices(table, columns, source);

  BaselineMap out;
  for (const auto& row : table.rows) {
    const std::string player = trimmed(row.fields[col[0]]);
    const std::string tag = trimmed(row.fields[col[1]]);
    BaselineSource which;
    if (tag == "tsn") which = BaselineSource::kTsn;
    else if (tag == "nhl") which = BaselineSource::kNhl;
    else throw ValidationError(fmt::format("{}:{}: unknown baseline source '{}'", source, row.line, tag));

    const double projected = real_field(row, col[2], columns[2], source);
    if (projected < 0) {
      throw ValidationError(fmt::format("{}:{}: negative projected_ppg {}", source, row.line, projected));
    }
    if (player.empty()) throw ValidationError(fmt::format("{}:{}: empty player_id", source, row.line));
    auto [it, inserted] = out.emplace(BaselineKey{player, which}, projected);
    if (!inserted) {
      throw ValidationError(
          fmt::format("{}:{}: duplicate baseline for ('{}', {})", source, row.line, player, tag));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

SplitSizes split_sizes(std::size_t n) {
  SplitSizes s;
  s.test = n / 10;
  s.validation = n / 10;
  s.train = n - s.test - s.validation;
  return s;
}

std::vector<Split> assign_splits(std::size_t n, std::uint64_t seed) {
  if (n < 10) throw ValidationError(fmt::format("need at least 10 rows to split, got {}", n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  const auto sizes = split_sizes(n);
  std::vector<Split> out(n, Split::kTrain);
  for (std::size_t i = 0; i < sizes.test; ++i) out[order[i]] = Split::kTest;
  for (std::size_t i = sizes.test; i < sizes.test + sizes.validation; ++i) out[order[i]] = Split::kValidation;
  return out;
}

Scaler::Scaler(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), std_(std::move(stddev)) {
  if (mean_.size() != std_.size()) throw ShapeError("scaler mean/std length mismatch");
  for (std::size_t j = 0; j < std_.size(); ++j) {
    if (!std::isfinite(mean_[j])) throw ValidationError("scaler mean must be finite");
    if (!(std::isfinite(std_[j]) && std_[j] > 0)) throw ValidationError("scaler std must be finite and positive");
  }
}

Scaler Scaler::identity(std::size_t width) {
  return Scaler(std::vector<double>(width, 0.0), std::vector<double>(width, 1.0));
}

Matrix Scaler::transform(const Matrix& rows) const {
  if (rows.cols() != width() && !rows.empty()) {
    throw ShapeError(fmt::format("scaler expects {} columns, got {}", width(), rows.cols()));
  }
  Matrix out(rows.rows(), width());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    for (std::size_t j = 0; j < width(); ++j) out(i, j) = (rows(i, j) - mean_[j]) / std_[j];
  }
  return out;
}

Matrix Scaler::inverse_transform(const Matrix& rows) const {
  if (rows.cols() != width() && !rows.empty()) {
    throw ShapeError(fmt::format("scaler expects {} columns, got {}", width(), rows.cols()));
  }
  Matrix out(rows.rows(), width());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    for (std::size_t j = 0; j < width(); ++j) out(i, j) = rows(i, j) * std_[j] + mean_[j];
  }
  return out;
}

Scaler fit_scaler(const Matrix& train_rows) {
  if (train_rows.empty()) throw ValidationError("cannot fit a scaler on an empty training split");
  const std::size_t n = train_rows.rows();
  const std::size_t w = train_rows.cols();
  std::vector<double> mean(w, 0.0), stddev(w, 0.0);
  for (std::size_t j = 0; j < w; ++j) {
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += train_rows(i, j);
    mean[j] = sum / static_cast<double>(n);
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = train_rows(i, j) - mean[j];
      ss += d * d;
    }
    stddev[j] = std::sqrt(ss / static_cast<double>(n));
    if (!(stddev[j] > 0)) stddev[j] = 1.0;
  }
  return Scaler(std::move(mean), std::move(stddev));
}

Matrix feature_matrix(const std::vector<SkaterRecord>& records) {
  Matrix out(records.size(), kFeatureCount);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto f = records[i].features();
    for (std::size_t j = 0; j < kFeatureCount; ++j) out(i, j) = f[j];
  }
  return out;
}

std::vector<double> label_vector(const std::vector<SkaterRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(ppg(r).value());
  return out;
}

std::vector<std::size_t> Dataset::indices(Split which) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < split_assignment.size(); ++i) {
    if (split_assignment[i] == which) out.push_back(i);
  }
  return out;
}

Matrix Dataset::features_of(Split which) const {
  const auto idx = indices(which);
  return features.select_rows(idx);
}

std::vector<double> Dataset::labels_of(Split which) const {
  std::vector<double> out;
  for (std::size_t i : indices(which)) out.push_back(labels[i]);
  return out;
}

Dataset build_dataset(const Matrix& raw_features, std::vector<double> labels, std::uint64_t seed) {
  if (raw_features.rows() != labels.size()) throw ShapeError("feature rows and labels differ in length");
  Dataset ds;
  ds.seed = seed;
  ds.split_assignment = assign_splits(raw_features.rows(), seed);
  ds.labels = std::move(labels);

  std::vector<std::size_t> train;
  for (std::size_t i = 0; i < ds.split_assignment.size(); ++i) {
    if (ds.split_assignment[i] == Split::kTrain) train.push_back(i);
  }
  ds.scaler = fit_scaler(raw_features.select_rows(train));
  ds.features = ds.scaler.transform(raw_features);
  return ds;
}

Dataset build_dataset(const std::vector<SkaterRecord>& records, std::uint64_t seed) {
  return build_dataset(feature_matrix(records), label_vector(records), seed);
}

}  // namespace puckpar
