#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "uuvlab/rng.hpp"

namespace uuvlab {

/// Dense MLP with tanh hidden activations and a linear output layer.
/// Forward caches layer inputs so backward() can return exact analytic
/// gradients for the most recent batch.
class Mlp {
 public:
  Mlp() = default;
  Mlp(int inputSize, const std::vector<int>& hidden, int outputSize);

  void initialize(Rng& rng);

  /// Rows are samples.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input);

  /// upstreamGrad: dL/dOutput for the batch of the last forward() call.
  /// Returns dL/dInput; parameter gradients are accumulated into grads().
  Eigen::MatrixXd backward(const Eigen::MatrixXd& upstreamGrad);

  void zeroGrads();

  int inputSize() const { return inputSize_; }
  int outputSize() const { return outputSize_; }
  int numLayers() const { return static_cast<int>(weights_.size()); }

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }
  std::vector<Eigen::MatrixXd>& weightGrads() { return weightGrads_; }
  std::vector<Eigen::VectorXd>& biasGrads() { return biasGrads_; }

 private:
  int inputSize_ = 0;
  int outputSize_ = 0;
  std::vector<Eigen::MatrixXd> weights_;   // layer l: (out x in)
  std::vector<Eigen::VectorXd> biases_;
  std::vector<Eigen::MatrixXd> weightGrads_;
  std::vector<Eigen::VectorXd> biasGrads_;
  std::vector<Eigen::MatrixXd> inputs_;    // cached per-layer inputs
  std::vector<Eigen::MatrixXd> outputs_;   // cached post-activation outputs
};

inline Mlp::Mlp(int inputSize, const std::vector<int>& hidden, int outputSize)
    : inputSize_(inputSize), outputSize_(outputSize) {
  int prev = inputSize;
  std::vector<int> sizes = hidden;
  sizes.push_back(outputSize);
  for (int s : sizes) {
    weights_.emplace_back(Eigen::MatrixXd::Zero(s, prev));
    biases_.emplace_back(Eigen::VectorXd::Zero(s));
    weightGrads_.emplace_back(Eigen::MatrixXd::Zero(s, prev));
    biasGrads_.emplace_back(Eigen::VectorXd::Zero(s));
    prev = s;
  }
}

inline void Mlp::initialize(Rng& rng) {
  for (auto& W : weights_) {
    // Orthogonal-ish scaled Gaussian init; final layer kept small.
    const double scale = (&W == &weights_.back())
                             ? 0.01
                             : std::sqrt(2.0 / static_cast<double>(W.cols()));
    for (int i = 0; i < W.rows(); ++i)
      for (int j = 0; j < W.cols(); ++j) W(i, j) = scale * rng.normal();
  }
  for (auto& b : biases_) b.setZero();
}

inline Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input) {
  if (input.cols() != inputSize_) {
    throw std::invalid_argument("Mlp::forward: input width mismatch");
  }
  inputs_.assign(weights_.size(), {});
  outputs_.assign(weights_.size(), {});
  Eigen::MatrixXd x = input;
  for (size_t l = 0; l < weights_.size(); ++l) {
    inputs_[l] = x;
    Eigen::MatrixXd z =
        (x * weights_[l].transpose()).rowwise() + biases_[l].transpose();
    if (l + 1 < weights_.size()) z = z.array().tanh();
    outputs_[l] = z;
    x = std::move(z);
  }
  return x;
}

inline Eigen::MatrixXd Mlp::backward(const Eigen::MatrixXd& upstreamGrad) {
  if (inputs_.empty()) throw std::logic_error("Mlp::backward before forward");
  Eigen::MatrixXd g = upstreamGrad;
  for (int l = numLayers() - 1; l >= 0; --l) {
    if (l + 1 < numLayers()) {
      // Through tanh: dz = g * (1 - y^2).
      g = g.array() * (1.0 - outputs_[l].array().square());
    }
    weightGrads_[l] += g.transpose() * inputs_[l];
    biasGrads_[l] += g.colwise().sum().transpose();
    g = g * weights_[l];
  }
  return g;
}

inline void Mlp::zeroGrads() {
  for (auto& g : weightGrads_) g.setZero();
  for (auto& g : biasGrads_) g.setZero();
}

}  // namespace uuvlab
