#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "puckpar/mlp.hpp"
#include "puckpar/rng.hpp"
#include "support/oracles.hpp"

using namespace puckpar;
using namespace puckpar::testing;

namespace {

Matrix random_batch(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.normal();
  }
  return m;
}

MlpNetwork random_network(std::vector<std::size_t> sizes, std::uint64_t seed) {
  auto net = MlpNetwork::glorot(std::move(sizes), seed);
  Rng rng(seed ^ 0xabcdefULL);
  for (auto& b : net.biases) {
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.uniform(-0.1, 0.1);
  }
  return net;
}

}  // namespace

TEST(Mlp, ZeroNetworkPredictsZero) {
  const auto net = MlpNetwork::zeros({4, 16, 1});
  Rng rng(1);
  const auto x = random_batch(10, 4, rng);
  for (double p : predict_mlp(net, x)) EXPECT_EQ(p, 0.0);
}

TEST(Mlp, ZeroNetworkZeroTargetsZeroGradient) {
  const auto net = MlpNetwork::zeros({4, 32, 16, 1});
  Rng rng(2);
  const auto x = random_batch(8, 4, rng);
  const std::vector<double> y(8, 0.0);
  const auto g = mlp_gradient(net, x, y);
  EXPECT_EQ(g.loss, 0.0);
  for (double v : g.flatten()) EXPECT_EQ(v, 0.0);
}

TEST(Mlp, SingleLinearNeuronClosedForm) {
  // No hidden layer: loss = 1/N sum (Xw + b - y)^2, grad_w = 2/N X'(Xw + b - y).
  auto net = MlpNetwork::zeros({3, 1});
  net.weights[0] << 0.5, -1.0, 2.0;
  net.biases[0] << 0.25;
  Rng rng(3);
  const auto x = random_batch(12, 3, rng);
  std::vector<double> y(12);
  for (auto& v : y) v = rng.normal();
  std::vector<double> r(12);
  for (std::size_t i = 0; i < 12; ++i) r[i] = 0.5 * x(i, 0) - x(i, 1) + 2 * x(i, 2) + 0.25 - y[i];
  const auto g = mlp_gradient(net, x, y);
  for (std::size_t c = 0; c < 3; ++c) {
    double expected = 0;
    for (std::size_t i = 0; i < 12; ++i) expected += x(i, c) * r[i];
    EXPECT_NEAR(g.weights[0](0, static_cast<Eigen::Index>(c)), 2.0 / 12 * expected, 1e-12);
  }
  double bias = 0;
  for (double v : r) bias += v;
  EXPECT_NEAR(g.biases[0][0], 2.0 / 12 * bias, 1e-12);
}

class MlpGradientCheck : public ::testing::TestWithParam<std::vector<std::size_t>> {};

TEST_P(MlpGradientCheck, MatchesFiniteDifferences) {
  std::vector<std::size_t> sizes{4};
  for (auto w : GetParam()) sizes.push_back(w);
  sizes.push_back(1);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto net = random_network(sizes, 100 + seed);
    Rng rng(seed);
    const auto x = random_batch(16, 4, rng);
    std::vector<double> y(16);
    for (auto& v : y) v = rng.uniform(0, 2);
    const auto flat = net.flatten();
    const auto numeric = finite_difference_gradient(sizes, flat, x, y, 1e-6);
    const auto exact = mlp_gradient(net, x, y);
    EXPECT_LT(relative_error(exact.flatten(), numeric), 1e-4);
    EXPECT_NEAR(exact.loss, naive_mlp_loss(sizes, flat, x, y), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(GridArchitectures, MlpGradientCheck,
                         ::testing::Values(std::vector<std::size_t>{16}, std::vector<std::size_t>{32},
                                           std::vector<std::size_t>{32, 16}));

TEST(Mlp, FlattenAssignRoundTrip) {
  const auto net = random_network({4, 32, 16, 1}, 5);
  auto copy = MlpNetwork::zeros({4, 32, 16, 1});
  copy.assign(net.flatten());
  EXPECT_EQ(copy, net);
  EXPECT_EQ(net.parameter_count(), 4u * 32 + 32 + 32 * 16 + 16 + 16 + 1);
  EXPECT_THROW(copy.assign(std::vector<double>(3)), ShapeError);
}

TEST(Mlp, GradientRejectsNonFinite) {
  auto net = MlpNetwork::zeros({2, 3, 1});
  Matrix x{{1.0, std::numeric_limits<double>::quiet_NaN()}};
  EXPECT_THROW(mlp_gradient(net, x, std::vector<double>{1.0}), ValidationError);
  Matrix ok{{1.0, 2.0}};
  EXPECT_THROW(mlp_gradient(net, ok, std::vector<double>{INFINITY}), ValidationError);
  net.weights[0](0, 0) = INFINITY;
  EXPECT_THROW(mlp_gradient(net, ok, std::vector<double>{1.0}), ValidationError);
  EXPECT_THROW(mlp_gradient(MlpNetwork::zeros({3, 1}), ok, std::vector<double>{1.0}), ShapeError);
}

TEST(Mlp, TrainingLearnsAndIsDeterministic) {
  Rng rng(4);
  const auto x = random_batch(200, 4, rng);
  std::vector<double> y(200);
  for (std::size_t i = 0; i < 200; ++i) y[i] = 0.5 + 0.3 * x(i, 2) + 0.2 * std::max(0.0, x(i, 3));
  MlpHyper h;
  h.max_epochs = 200;
  const auto a = train_mlp(h, x, y, 11);
  const auto b = train_mlp(h, x, y, 11);
  EXPECT_EQ(a.network, b.network);
  EXPECT_EQ(a.epochs_run, b.epochs_run);
  EXPECT_LT(a.final_training_loss, 0.01);
  EXPECT_NEAR(a.final_training_loss, mlp_loss(a.network, x, y), 0.0);
}

TEST(Mlp, EarlyStopRestoresBest) {
  Rng rng(5);
  const auto x = random_batch(100, 4, rng);
  std::vector<double> y(100);
  for (auto& v : y) v = rng.normal();
  const auto vx = random_batch(30, 4, rng);
  std::vector<double> vy(30);
  for (auto& v : vy) v = rng.normal();
  MlpHyper h;
  h.hidden = {32};
  h.patience = 5;
  h.max_epochs = 500;
  const auto r = train_mlp(h, x, y, 3, &vx, vy);
  EXPECT_LT(r.epochs_run, 500u);
  // Same trajectory with every epoch accepted yields the final-epoch weights.
  MlpHyper replay = h;
  replay.max_epochs = r.epochs_run;
  replay.min_delta = -std::numeric_limits<double>::infinity();
  const auto last = train_mlp(replay, x, y, 3, &vx, vy);
  EXPECT_NE(r.network, last.network);
  const auto mae = [&](const MlpNetwork& n) {
    const auto p = predict_mlp(n, vx);
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - vy[i]);
    return s / static_cast<double>(p.size());
  };
  EXPECT_LT(mae(r.network), mae(last.network));
}

TEST(Mlp, DivergenceRaises) {
  Rng rng(6);
  const auto x = random_batch(64, 4, rng);
  std::vector<double> y(64);
  for (auto& v : y) v = 1e6 * rng.normal();
  MlpHyper h;
  h.learning_rate = 10.0;
  h.max_epochs = 100;
  EXPECT_THROW(train_mlp(h, x, y, 1), TrainingDivergedError);
}
