// Copyright 2026 The safin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Feed-forward network with tanh hidden layers and a linear output layer,
// trained on mean squared error with Adam.
//
// Samples are stored column-wise: an input batch is an (inputs x N) matrix
// and the network output is (outputs x N). Inputs and targets are
// standardized with per-feature mean and scale stored in the model, so
// `predict` consumes and produces physical units.

#ifndef SAFIN_MLP_HPP_
#define SAFIN_MLP_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace safin {

template <typename Scalar>
class Mlp {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Mlp() = default;

  // All weights and biases zero, identity normalization.
  explicit Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need >= 2 layers");
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      weights_.push_back(Matrix::Zero(sizes_[l + 1], sizes_[l]));
      biases_.push_back(Vector::Zero(sizes_[l + 1]));
    }
    input_mean_ = Vector::Zero(sizes_.front());
    input_scale_ = Vector::Ones(sizes_.front());
    output_mean_ = Vector::Zero(sizes_.back());
    output_scale_ = Vector::Ones(sizes_.back());
  }

  // Glorot-uniform weights, zero biases.
  static Mlp glorot(std::vector<int> sizes, std::uint64_t seed) {
    Mlp m(std::move(sizes));
    std::mt19937_64 rng(seed);
    for (auto& w : m.weights_) {
      const double limit = std::sqrt(6.0 / double(w.rows() + w.cols()));
      std::uniform_real_distribution<double> dist(-limit, limit);
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        w.data()[i] = Scalar(dist(rng));
      }
    }
    return m;
  }

  const std::vector<int>& sizes() const { return sizes_; }
  int inputs() const { return sizes_.front(); }
  int outputs() const { return sizes_.back(); }
  std::size_t layers() const { return weights_.size(); }

  Matrix& weight(std::size_t l) { return weights_[l]; }
  const Matrix& weight(std::size_t l) const { return weights_[l]; }
  Vector& bias(std::size_t l) { return biases_[l]; }
  const Vector& bias(std::size_t l) const { return biases_[l]; }

  Vector& input_mean() { return input_mean_; }
  const Vector& input_mean() const { return input_mean_; }
  Vector& input_scale() { return input_scale_; }
  const Vector& input_scale() const { return input_scale_; }
  Vector& output_mean() { return output_mean_; }
  const Vector& output_mean() const { return output_mean_; }
  Vector& output_scale() { return output_scale_; }
  const Vector& output_scale() const { return output_scale_; }

  Matrix normalize_inputs(const Matrix& x) const {
    return (x.colwise() - input_mean_).array().colwise() /
           input_scale_.array();
  }
  Matrix normalize_targets(const Matrix& y) const {
    return (y.colwise() - output_mean_).array().colwise() /
           output_scale_.array();
  }

  // Network output in normalized target units.
  Matrix forward_normalized(const Matrix& xn) const {
    Matrix a = xn;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      Matrix z = (weights_[l] * a).colwise() + biases_[l];
      a = l + 1 < weights_.size() ? Matrix(z.array().tanh()) : z;
    }
    return a;
  }

  Matrix predict(const Matrix& x) const {
    Matrix yn = forward_normalized(normalize_inputs(x));
    return (yn.array().colwise() * output_scale_.array()).colwise() +
           output_mean_.array();
  }

  Vector predict(const Vector& x) const {
    return predict(Matrix(x)).col(0);
  }

  Eigen::Index parameter_count() const {
    Eigen::Index n = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      n += weights_[l].size() + biases_[l].size();
    }
    return n;
  }

  // Weights (column-major per layer) followed by biases, layer by layer.
  Vector parameters() const {
    Vector p(parameter_count());
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      p.segment(k, weights_[l].size()) =
          Eigen::Map<const Vector>(weights_[l].data(), weights_[l].size());
      k += weights_[l].size();
      p.segment(k, biases_[l].size()) = biases_[l];
      k += biases_[l].size();
    }
    return p;
  }

  void set_parameters(const Vector& p) {
    if (p.size() != parameter_count()) {
      throw std::invalid_argument("Mlp::set_parameters: size mismatch");
    }
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      Eigen::Map<Vector>(weights_[l].data(), weights_[l].size()) =
          p.segment(k, weights_[l].size());
      k += weights_[l].size();
      biases_[l] = p.segment(k, biases_[l].size());
      k += biases_[l].size();
    }
  }

 private:
  std::vector<int> sizes_;
  std::vector<Matrix> weights_;
  std::vector<Vector> biases_;
  Vector input_mean_;
  Vector input_scale_;
  Vector output_mean_;
  Vector output_scale_;
};

// Mean over samples and outputs of the squared error between the network
// output and normalized targets `yn`. When `grad` is non-null it receives
// the gradient with the layout of Mlp::parameters().
template <typename Scalar>
Scalar mse_loss(const Mlp<Scalar>& m,
                const typename Mlp<Scalar>::Matrix& xn,
                const typename Mlp<Scalar>::Matrix& yn,
                typename Mlp<Scalar>::Vector* grad = nullptr) {
  using Matrix = typename Mlp<Scalar>::Matrix;
  using Vector = typename Mlp<Scalar>::Vector;
  const std::size_t depth = m.layers();

  std::vector<Matrix> acts;
  acts.reserve(depth + 1);
  acts.push_back(xn);
  for (std::size_t l = 0; l < depth; ++l) {
    Matrix z = (m.weight(l) * acts.back()).colwise() + m.bias(l);
    acts.push_back(l + 1 < depth ? Matrix(z.array().tanh()) : z);
  }
  const Matrix diff = acts.back() - yn;
  const Scalar denom = Scalar(diff.size());
  const Scalar loss = diff.squaredNorm() / denom;
  if (grad == nullptr) return loss;

  grad->resize(m.parameter_count());
  std::vector<Eigen::Index> offsets(depth);
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < depth; ++l) {
    offsets[l] = k;
    k += m.weight(l).size() + m.bias(l).size();
  }

  Matrix delta = (Scalar(2) / denom) * diff;
  for (std::size_t l = depth; l-- > 0;) {
    const Matrix dw = delta * acts[l].transpose();
    const Vector db = delta.rowwise().sum();
    grad->segment(offsets[l], dw.size()) =
        Eigen::Map<const Vector>(dw.data(), dw.size());
    grad->segment(offsets[l] + dw.size(), db.size()) = db;
    if (l > 0) {
      delta = (m.weight(l).transpose() * delta).array() *
              (Scalar(1) - acts[l].array().square());
    }
  }
  return loss;
}

struct TrainOptions {
  int epochs = 20;
  double learning_rate = 1e-3;
  // Cosine decay of the per-epoch learning rate down to
  // learning_rate * final_lr_fraction; 1 keeps it constant.
  double final_lr_fraction = 1.0;
  int batch = 256;
  std::uint64_t seed = 1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Per-feature standardization statistics over the columns of `x`. Features
// with (near) zero spread get scale 1.
template <typename Scalar>
void fit_standardization(const typename Mlp<Scalar>::Matrix& x,
                         typename Mlp<Scalar>::Vector& mean,
                         typename Mlp<Scalar>::Vector& scale) {
  const Scalar n = Scalar(x.cols());
  mean = x.rowwise().sum() / n;
  scale = ((x.colwise() - mean).array().square().rowwise().sum() / n).sqrt();
  for (Eigen::Index i = 0; i < scale.size(); ++i) {
    if (!(scale[i] > Scalar(1e-12))) scale[i] = Scalar(1);
  }
}

// Mini-batch Adam on mse_loss. Normalization is refit on (x, y) before
// training. `epoch_loss`, when given, receives the mean batch loss per
// epoch. Throws std::runtime_error on a non-finite loss.
template <typename Scalar>
Mlp<Scalar> train_mlp(const typename Mlp<Scalar>::Matrix& x,
                      const typename Mlp<Scalar>::Matrix& y,
                      const Mlp<Scalar>& model_init, const TrainOptions& opt,
                      std::vector<double>* epoch_loss = nullptr) {
  using Matrix = typename Mlp<Scalar>::Matrix;
  using Vector = typename Mlp<Scalar>::Vector;
  if (x.cols() == 0) throw std::invalid_argument("train_mlp: empty data");
  if (x.cols() != y.cols() || x.rows() != model_init.inputs() ||
      y.rows() != model_init.outputs()) {
    throw std::invalid_argument("train_mlp: shape mismatch");
  }
  if (opt.epochs <= 0) return model_init;

  Mlp<Scalar> m = model_init;
  fit_standardization<Scalar>(x, m.input_mean(), m.input_scale());
  fit_standardization<Scalar>(y, m.output_mean(), m.output_scale());
  const Matrix xn = m.normalize_inputs(x);
  const Matrix yn = m.normalize_targets(y);

  Vector params = m.parameters();
  Vector first = Vector::Zero(params.size());
  Vector second = Vector::Zero(params.size());
  Vector grad;
  const Scalar b1 = Scalar(opt.beta1);
  const Scalar b2 = Scalar(opt.beta2);
  const Scalar eps = Scalar(opt.epsilon);
  Scalar b1_pow = 1;
  Scalar b2_pow = 1;

  std::mt19937_64 rng(opt.seed);
  std::vector<Eigen::Index> order(x.cols());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::Index batch = std::max(1, opt.batch);

  Matrix xb;
  Matrix yb;
  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    const double progress =
        opt.epochs > 1 ? double(epoch) / double(opt.epochs - 1) : 0.0;
    const double fraction =
        opt.final_lr_fraction +
        (1.0 - opt.final_lr_fraction) * 0.5 *
            (1.0 + std::cos(3.14159265358979323846 * progress));
    const Scalar lr = Scalar(opt.learning_rate * fraction);
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    Eigen::Index batches = 0;
    for (Eigen::Index start = 0; start < x.cols(); start += batch) {
      const Eigen::Index count = std::min(batch, x.cols() - start);
      xb.resize(xn.rows(), count);
      yb.resize(yn.rows(), count);
      for (Eigen::Index j = 0; j < count; ++j) {
        xb.col(j) = xn.col(order[start + j]);
        yb.col(j) = yn.col(order[start + j]);
      }
      const Scalar loss = mse_loss(m, xb, yb, &grad);
      if (!std::isfinite(double(loss))) {
        throw std::runtime_error("train_mlp: non-finite loss at epoch " +
                                 std::to_string(epoch) + ", batch " +
                                 std::to_string(batches));
      }
      loss_sum += double(loss);
      ++batches;

      b1_pow *= b1;
      b2_pow *= b2;
      first = b1 * first + (Scalar(1) - b1) * grad;
      second = b2 * second + (Scalar(1) - b2) * grad.cwiseAbs2();
      const Scalar step = lr * std::sqrt(Scalar(1) - b2_pow) /
                          (Scalar(1) - b1_pow);
      params.array() -=
          step * first.array() /
          (second.array().sqrt() + eps * std::sqrt(Scalar(1) - b2_pow));
      m.set_parameters(params);
    }
    if (epoch_loss) epoch_loss->push_back(loss_sum / double(batches));
  }
  return m;
}

}  // namespace safin

#endif  // SAFIN_MLP_HPP_
