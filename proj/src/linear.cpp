#include "puckpar/linear.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

namespace puckpar {

LinearModel fit_linear(const LinearHyper& hyper, const Matrix& features, std::span<const double> labels) {
  const std::size_t n = features.rows();
  const std::size_t p = features.cols();
  if (n == 0) throw ValidationError("linear: no training rows");
  if (labels.size() != n) throw ShapeError("linear: feature rows and labels differ in length");

  Eigen::VectorXd x_mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  double y_mean = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) x_mean[static_cast<Eigen::Index>(j)] += features(i, j);
    y_mean += labels[i];
  }
  x_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);

  Eigen::MatrixXd xc(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Eigen::VectorXd yc(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < p; ++j) {
      const auto c = static_cast<Eigen::Index>(j);
      xc(r, c) = features(i, j) - x_mean[c];
    }
    yc[r] = labels[i] - y_mean;
  }

  Eigen::MatrixXd gram = xc.transpose() * xc;
  gram.diagonal().array() += hyper.lambda;
  const Eigen::VectorXd rhs = xc.transpose() * yc;
  const Eigen::VectorXd w = gram.colPivHouseholderQr().solve(rhs);

  LinearModel model;
  model.coefficients.assign(w.data(), w.data() + w.size());
  model.intercept = y_mean - x_mean.dot(w);
  return model;
}

std::vector<double> predict_linear(const LinearModel& model, const Matrix& features) {
  if (features.cols() != model.coefficients.size() && !features.empty()) {
    throw ShapeError(fmt::format("linear: expected {} features, got {}", model.coefficients.size(), features.cols()));
  }
  std::vector<double> out(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    double y = model.intercept;
    for (std::size_t j = 0; j < model.coefficients.size(); ++j) y += model.coefficients[j] * features(i, j);
    out[i] = y;
  }
  return out;
}

}  // namespace puckpar
