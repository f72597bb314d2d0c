#include "puckpar/mlp.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "puckpar/metrics.hpp"
#include "puckpar/rng.hpp"

namespace puckpar {

namespace {

using ConstMap = Eigen::Map<const RowMatrix>;

ConstMap as_eigen(const Matrix& m) {
  return ConstMap(m.data().data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
}

// Pre-activations and activations of every layer for one batch.
struct ForwardPass {
  std::vector<RowMatrix> pre;   // pre[l]: batch x layer_sizes[l+1]
  std::vector<RowMatrix> post;  // post[0] = input, post[l+1] = activation of layer l
};

template <typename Input>
ForwardPass forward(const MlpNetwork& net, const Input& input) {
  ForwardPass pass;
  const std::size_t layers = net.weights.size();
  pass.pre.resize(layers);
  pass.post.resize(layers + 1);
  pass.post[0] = input;
  for (std::size_t l = 0; l < layers; ++l) {
    pass.pre[l] = pass.post[l] * net.weights[l].transpose();
    pass.pre[l].rowwise() += net.biases[l].transpose();
    if (l + 1 < layers) pass.post[l + 1] = pass.pre[l].cwiseMax(0.0);
    else pass.post[l + 1] = pass.pre[l];
  }
  return pass;
}

void check_width(const MlpNetwork& net, const Matrix& features) {
  if (features.cols() != net.layer_sizes.front() && !features.empty()) {
    throw ShapeError(fmt::format("mlp: expected {} features, got {}", net.layer_sizes.front(), features.cols()));
  }
}

}  // namespace

MlpNetwork MlpNetwork::zeros(std::vector<std::size_t> layer_sizes) {
  if (layer_sizes.size() < 2) throw ValidationError("mlp: need at least an input and an output layer");
  MlpNetwork net;
  net.layer_sizes = std::move(layer_sizes);
  for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(net.layer_sizes[l]);
    const auto out = static_cast<Eigen::Index>(net.layer_sizes[l + 1]);
    net.weights.push_back(RowMatrix::Zero(out, in));
    net.biases.push_back(Eigen::VectorXd::Zero(out));
  }
  return net;
}

MlpNetwork MlpNetwork::glorot(std::vector<std::size_t> layer_sizes, std::uint64_t seed) {
  MlpNetwork net = zeros(std::move(layer_sizes));
  Rng rng(seed);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    auto& w = net.weights[l];
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-limit, limit);
    }
  }
  return net;
}

std::size_t MlpNetwork::parameter_count() const {
  std::size_t count = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) count += weights[l].size() + biases[l].size();
  return count;
}

std::vector<double> MlpNetwork::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (std::size_t l = 0; l < weights.size(); ++l) {
    flat.insert(flat.end(), weights[l].data(), weights[l].data() + weights[l].size());
    flat.insert(flat.end(), biases[l].data(), biases[l].data() + biases[l].size());
  }
  return flat;
}

void MlpNetwork::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw ShapeError("mlp: parameter vector has the wrong length");
  std::size_t at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(at), weights[l].size(), weights[l].data());
    at += static_cast<std::size_t>(weights[l].size());
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(at), biases[l].size(), biases[l].data());
    at += static_cast<std::size_t>(biases[l].size());
  }
}

void MlpNetwork::check() const {
  if (layer_sizes.size() < 2) throw ValidationError("mlp: need at least an input and an output layer");
  if (layer_sizes.back() != 1) throw ValidationError("mlp: output layer must have width 1");
  if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size()) {
    throw ValidationError("mlp: layer count does not match layer_sizes");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (layer_sizes[l] == 0) throw ValidationError("mlp: layer widths must be positive");
    if (static_cast<std::size_t>(weights[l].rows()) != layer_sizes[l + 1] ||
        static_cast<std::size_t>(weights[l].cols()) != layer_sizes[l] ||
        static_cast<std::size_t>(biases[l].size()) != layer_sizes[l + 1]) {
      throw ValidationError(fmt::format("mlp: layer {} has the wrong shape", l));
    }
  }
}

std::vector<double> MlpGradient::flatten() const {
  std::vector<double> flat;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    flat.insert(flat.end(), weights[l].data(), weights[l].data() + weights[l].size());
    flat.insert(flat.end(), biases[l].data(), biases[l].data() + biases[l].size());
  }
  return flat;
}

double mlp_loss(const MlpNetwork& net, const Matrix& features, std::span<const double> targets) {
  const auto predicted = predict_mlp(net, features);
  if (predicted.size() != targets.size()) throw ShapeError("mlp: feature rows and targets differ in length");
  if (predicted.empty()) throw ValidationError("mlp: empty batch");
  double sum = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - targets[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predicted.size());
}

namespace {

MlpGradient backprop(const MlpNetwork& net, const Matrix& features, std::span<const double> targets) {
  const auto batch = static_cast<Eigen::Index>(features.rows());
  const ForwardPass pass = forward(net, as_eigen(features));
  const std::size_t layers = net.weights.size();

  const Eigen::Map<const Eigen::VectorXd> y(targets.data(), batch);
  const Eigen::VectorXd residual = pass.post[layers].col(0) - y;

  MlpGradient grad;
  grad.weights.resize(layers);
  grad.biases.resize(layers);
  grad.loss = residual.squaredNorm() / static_cast<double>(batch);

  // d loss / d pre-activation of the current layer, batch x width.
  RowMatrix delta = (2.0 / static_cast<double>(batch)) * residual;
  for (std::size_t l = layers; l-- > 0;) {
    grad.weights[l] = delta.transpose() * pass.post[l];
    grad.biases[l] = delta.colwise().sum().transpose();
    if (l == 0) break;
    RowMatrix upstream = delta * net.weights[l];
    delta = upstream.cwiseProduct((pass.pre[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return grad;
}

}  // namespace

MlpGradient mlp_gradient(const MlpNetwork& net, const Matrix& features, std::span<const double> targets) {
  check_width(net, features);
  if (features.rows() != targets.size()) throw ShapeError("mlp: feature rows and targets differ in length");
  if (features.empty()) throw ValidationError("mlp: empty batch");
  for (double v : features.data()) {
    if (!std::isfinite(v)) throw ValidationError("mlp: non-finite input");
  }
  for (double v : targets) {
    if (!std::isfinite(v)) throw ValidationError("mlp: non-finite target");
  }
  for (double v : net.flatten()) {
    if (!std::isfinite(v)) throw ValidationError("mlp: non-finite parameter");
  }
  return backprop(net, features, targets);
}

std::vector<double> predict_mlp(const MlpNetwork& net, const Matrix& features) {
  check_width(net, features);
  if (features.empty()) return {};
  const ForwardPass pass = forward(net, as_eigen(features));
  const auto& out = pass.post.back();
  return std::vector<double>(out.data(), out.data() + out.size());
}

MlpTrainingResult train_mlp(const MlpHyper& hyper, const Matrix& features, std::span<const double> labels,
                            std::uint64_t seed, const Matrix* validation_features,
                            std::span<const double> validation_labels) {
  const std::size_t n = features.rows();
  if (n == 0) throw ValidationError("mlp: no training rows");
  if (labels.size() != n) throw ShapeError("mlp: feature rows and labels differ in length");
  const bool use_validation = validation_features != nullptr && !validation_features->empty();
  if (use_validation && validation_features->rows() != validation_labels.size()) {
    throw ShapeError("mlp: validation rows and labels differ in length");
  }

  std::vector<std::size_t> sizes;
  sizes.push_back(features.cols());
  sizes.insert(sizes.end(), hyper.hidden.begin(), hyper.hidden.end());
  sizes.push_back(1);

  // Separate streams for initialisation and batch order.
  MlpNetwork net = MlpNetwork::glorot(sizes, derive_seed(seed, 0));
  Rng order_rng(derive_seed(seed, 1));

  std::vector<RowMatrix> vel_w;
  std::vector<Eigen::VectorXd> vel_b;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    vel_w.push_back(RowMatrix::Zero(net.weights[l].rows(), net.weights[l].cols()));
    vel_b.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch_size = std::min(hyper.batch_size, n);

  MlpNetwork best = net;
  double best_score = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  std::size_t epochs = 0;

  for (std::size_t epoch = 0; epoch < hyper.max_epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t stop = std::min(n, start + batch_size);
      const std::span<const std::size_t> idx(order.data() + start, stop - start);
      Matrix xb = features.select_rows(idx);
      std::vector<double> yb(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) yb[i] = labels[idx[i]];

      const MlpGradient g = backprop(net, xb, yb);
      if (!std::isfinite(g.loss)) {
        throw TrainingDivergedError(fmt::format("mlp: loss became non-finite in epoch {}", epoch + 1));
      }
      for (std::size_t l = 0; l < net.weights.size(); ++l) {
        vel_w[l] = hyper.momentum * vel_w[l] - hyper.learning_rate * g.weights[l];
        vel_b[l] = hyper.momentum * vel_b[l] - hyper.learning_rate * g.biases[l];
        net.weights[l] += vel_w[l];
        net.biases[l] += vel_b[l];
      }
    }
    epochs = epoch + 1;

    const double score = use_validation
                             ? mean_absolute_error(predict_mlp(net, *validation_features), validation_labels)
                             : mean_absolute_error(predict_mlp(net, features), labels);
    if (!std::isfinite(score)) {
      throw TrainingDivergedError(fmt::format("mlp: predictions became non-finite in epoch {}", epochs));
    }
    if (score < best_score - hyper.min_delta) {
      best_score = score;
      best = net;
      stale = 0;
    } else if (++stale >= hyper.patience) {
      break;
    }
  }

  MlpTrainingResult result;
  result.final_training_loss = mlp_loss(best, features, labels);
  result.network = std::move(best);
  result.epochs_run = epochs;
  return result;
}

}  // namespace puckpar
