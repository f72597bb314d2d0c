#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "puckpar/matrix.hpp"
#include "puckpar/mlp.hpp"

namespace puckpar::testing {

// Top 10 predicted scorers from the source table, as (predicted, actual).
//
// |pred - actual| row by row:
//   1.18-1.48 -> 0.30   1.02-1.17 -> 0.15   1.00-1.07 -> 0.07
//   0.99-1.17 -> 0.18   0.99-1.17 -> 0.18   0.98-1.28 -> 0.30
//   0.97-1.14 -> 0.17   0.96-1.06 -> 0.10   0.93-0.85 -> 0.08
//   0.91-1.21 -> 0.30
// sum 1.83 over 10 -> mean 0.183
// sorted: .07 .08 .10 .15 .17 | .18 .18 .30 .30 .30 -> median (.17+.18)/2 = 0.175
inline constexpr std::array<std::pair<double, double>, 10> kTopTenPairs = {{
    {1.18, 1.48}, {1.02, 1.17}, {1.00, 1.07}, {0.99, 1.17}, {0.99, 1.17},
    {0.98, 1.28}, {0.97, 1.14}, {0.96, 1.06}, {0.93, 0.85}, {0.91, 1.21},
}};
inline constexpr double kTopTenMean = 0.183;
inline constexpr double kTopTenMedian = 0.175;

// PAR written straight from its definition, with both denominators floored.
inline double par_oracle(double pred, double actual, double season, double recent, double w_o, double floor) {
  return (pred - actual) / (season < floor ? floor : season) + w_o * (pred - actual) / (recent < floor ? floor : recent);
}

// Plain-loop MSE of a ReLU network given its flattened parameters (same
// flatten order as MlpNetwork: per layer, row-major weights then biases).
double naive_mlp_loss(const std::vector<std::size_t>& layer_sizes, std::span<const double> flat, const Matrix& x,
                      std::span<const double> y);

// Central differences of naive_mlp_loss at step h.
std::vector<double> finite_difference_gradient(const std::vector<std::size_t>& layer_sizes,
                                               std::span<const double> flat, const Matrix& x,
                                               std::span<const double> y, double h);

// ||a - b|| / max(||a||, ||b||, tiny).
double relative_error(std::span<const double> a, std::span<const double> b);

// Brute-force k nearest training rows by (squared distance, index).
std::vector<std::size_t> brute_neighbors(const Matrix& train, std::span<const double> query, std::size_t k);

// Exhaustive best split of (x, y) over every feature and every midpoint,
// scored by total squared error of the two sides; ties keep the first found
// (lowest feature, then lowest threshold). Returns feature -1 when none.
struct BruteSplit {
  int feature = -1;
  double threshold = 0.0;
  double sse = 0.0;
};
BruteSplit brute_best_split(const Matrix& x, std::span<const double> y, std::size_t min_leaf);

// Population mean and standard deviation of one column.
std::pair<double, double> column_moments(const Matrix& m, std::size_t col);

}  // namespace puckpar::testing
