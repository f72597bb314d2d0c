#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "puckpar/domain.hpp"
#include "puckpar/matrix.hpp"

namespace puckpar {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Fully connected network: ReLU on hidden layers, linear scalar output.
// weights[l] is (layer_sizes[l+1] x layer_sizes[l]).
struct MlpNetwork {
  std::vector<std::size_t> layer_sizes;
  std::vector<RowMatrix> weights;
  std::vector<Eigen::VectorXd> biases;

  // All-zero network with the given shape.
  static MlpNetwork zeros(std::vector<std::size_t> layer_sizes);
  // Glorot-uniform weights, zero biases.
  static MlpNetwork glorot(std::vector<std::size_t> layer_sizes, std::uint64_t seed);

  std::size_t parameter_count() const;
  // Weights of each layer (row-major) followed by its biases, layer by layer.
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);

  // Throws ValidationError when matrix shapes disagree with layer_sizes.
  void check() const;

  friend bool operator==(const MlpNetwork& a, const MlpNetwork& b) {
    return a.layer_sizes == b.layer_sizes && a.flatten() == b.flatten();
  }
};

struct MlpGradient {
  std::vector<RowMatrix> weights;
  std::vector<Eigen::VectorXd> biases;
  double loss = 0.0;  // mean squared error on the batch

  std::vector<double> flatten() const;
};

// Mean squared error of the network on a batch.
double mlp_loss(const MlpNetwork& net, const Matrix& features, std::span<const double> targets);

// Exact backpropagated gradient of the batch MSE with respect to every weight
// and bias. Throws ValidationError on non-finite inputs or parameters.
MlpGradient mlp_gradient(const MlpNetwork& net, const Matrix& features, std::span<const double> targets);

std::vector<double> predict_mlp(const MlpNetwork& net, const Matrix& features);

struct MlpTrainingResult {
  MlpNetwork network;
  std::size_t epochs_run = 0;
  double final_training_loss = 0.0;
};

// Mini-batch gradient descent with momentum. Each epoch reshuffles the rows
// with the run seed's stream. The monitored score is validation MAE when a
// validation set is supplied, else training MAE; training stops once it has
// not improved by min_delta for `patience` epochs and the best-scoring
// weights are returned. Throws TrainingDivergedError on a non-finite loss.
MlpTrainingResult train_mlp(const MlpHyper& hyper, const Matrix& features, std::span<const double> labels,
                            std::uint64_t seed, const Matrix* validation_features = nullptr,
                            std::span<const double> validation_labels = {});

}  // namespace puckpar
