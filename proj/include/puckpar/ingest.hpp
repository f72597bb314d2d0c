#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "puckpar/domain.hpp"
#include "puckpar/matrix.hpp"

namespace puckpar {

// ---------------------------------------------------------------------------
// CSV loading

struct SkaterLoad {
  std::vector<SkaterRecord> records;  // file order
  std::vector<std::string> warnings;  // one per rejected row
};

// Rows with games_played == 0 are dropped with a warning. Any other bad row
// is fatal: SchemaError for a missing column, ParseError (with line number)
// for a non-numeric field, ValidationError for an out-of-range value.
SkaterLoad load_skaters(const std::filesystem::path& path);

std::map<std::string, TeamForm> load_team_forms(const std::filesystem::path& path);

enum class BaselineSource { kTsn, kNhl };
std::string_view to_string(BaselineSource source);

using BaselineKey = std::pair<std::string, BaselineSource>;  // (player_id, source)
using BaselineMap = std::map<BaselineKey, double>;

BaselineMap load_baselines(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Splitting and scaling

enum class Split : std::uint8_t { kTrain, kValidation, kTest };

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

// floor(0.1 N) rows each for test and validation, the remainder to train.
SplitSizes split_sizes(std::size_t n);

// Seeded shuffle of row indices, then contiguous assignment: the first
// floor(0.1 N) shuffled rows are test, the next floor(0.1 N) validation, the
// rest train. Throws ValidationError when n < 10.
std::vector<Split> assign_splits(std::size_t n, std::uint64_t seed);

class Scaler {
 public:
  Scaler() = default;
  // Throws ValidationError unless every std entry is finite and positive.
  Scaler(std::vector<double> mean, std::vector<double> stddev);

  static Scaler identity(std::size_t width);

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return std_; }
  std::size_t width() const { return mean_.size(); }

  // (x - mean) / std per column. Throws ShapeError on width mismatch.
  Matrix transform(const Matrix& rows) const;
  Matrix inverse_transform(const Matrix& rows) const;

  friend bool operator==(const Scaler&, const Scaler&) = default;

 private:
  std::vector<double> mean_;
  std::vector<double> std_;
};

// Column means and population standard deviations; zero-variance columns get
// std = 1. Throws ValidationError on an empty matrix.
Scaler fit_scaler(const Matrix& train_rows);

// Unscaled features for a set of records, in the fixed feature order.
Matrix feature_matrix(const std::vector<SkaterRecord>& records);

// Labels (points per game) for a set of records.
std::vector<double> label_vector(const std::vector<SkaterRecord>& records);

// Standardized features, labels and a frozen split. The scaler is fitted on
// the training rows only and already applied to every row.
struct Dataset {
  Matrix features;
  std::vector<double> labels;
  std::vector<Split> split_assignment;
  Scaler scaler;
  std::uint64_t seed = 0;

  std::vector<std::size_t> indices(Split which) const;
  Matrix features_of(Split which) const;
  std::vector<double> labels_of(Split which) const;
};

// Splits raw rows, fits the scaler on the training part and standardizes all
// rows with it.
Dataset build_dataset(const Matrix& raw_features, std::vector<double> labels, std::uint64_t seed);

// Convenience for record input: features and ppg labels from the records.
Dataset build_dataset(const std::vector<SkaterRecord>& records, std::uint64_t seed);

}  // namespace puckpar
