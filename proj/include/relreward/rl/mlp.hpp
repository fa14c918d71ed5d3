#ifndef RELREWARD_RL_MLP_HPP_
#define RELREWARD_RL_MLP_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace relreward::rl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Fully connected network with tanh hidden layers and a linear output.
// Parameters live in one flat vector (per layer: W column-major, then b) so
// that optimizers, gradient clipping and checkpoints treat them uniformly.
// Inputs and outputs are column-per-sample.
class Mlp {
 public:
  struct Cache {
    std::vector<MatrixXd> acts;  // acts[0] = input, acts[l] = output of layer l
  };

  Mlp() = default;
  explicit Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs input and output sizes");
    int n = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      offsets_.push_back(n);
      n += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
    }
    params = VectorXd::Zero(n);
  }

  VectorXd params;

  const std::vector<int>& sizes() const { return sizes_; }
  int num_layers() const { return static_cast<int>(offsets_.size()); }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }

  Eigen::Map<const MatrixXd> weight(int l) const {
    return {params.data() + offsets_[l], sizes_[l + 1], sizes_[l]};
  }
  Eigen::Map<MatrixXd> weight(int l) { return {params.data() + offsets_[l], sizes_[l + 1], sizes_[l]}; }
  Eigen::Map<const VectorXd> bias(int l) const {
    return {params.data() + offsets_[l] + sizes_[l + 1] * sizes_[l], sizes_[l + 1]};
  }
  Eigen::Map<VectorXd> bias(int l) {
    return {params.data() + offsets_[l] + sizes_[l + 1] * sizes_[l], sizes_[l + 1]};
  }

  MatrixXd forward(const MatrixXd& x, Cache* cache = nullptr) const {
    if (x.rows() != input_size()) throw std::invalid_argument("Mlp input has the wrong size");
    MatrixXd a = x;
    if (cache) {
      cache->acts.clear();
      cache->acts.push_back(x);
    }
    for (int l = 0; l < num_layers(); ++l) {
      MatrixXd z = weight(l) * a;
      z.colwise() += bias(l);
      if (l + 1 < num_layers()) z = z.array().tanh().matrix();
      a = std::move(z);
      if (cache) cache->acts.push_back(a);
    }
    return a;
  }

  // Gradient of sum(dout .* output) with respect to the parameters.
  VectorXd backward(const Cache& cache, const MatrixXd& dout) const {
    VectorXd grad = VectorXd::Zero(params.size());
    MatrixXd delta = dout;
    for (int l = num_layers() - 1; l >= 0; --l) {
      const MatrixXd& in = cache.acts[l];
      Eigen::Map<MatrixXd>(grad.data() + offsets_[l], sizes_[l + 1], sizes_[l]) =
          delta * in.transpose();
      Eigen::Map<VectorXd>(grad.data() + offsets_[l] + sizes_[l + 1] * sizes_[l], sizes_[l + 1]) =
          delta.rowwise().sum();
      if (l > 0) {
        MatrixXd da = weight(l).transpose() * delta;
        delta = da.array() * (1.0 - in.array().square());
      }
    }
    return grad;
  }

  // Orthogonal weights (gain sqrt(2) for hidden layers by convention) and
  // zero biases.
  void orthogonal_init(std::mt19937_64& rng, double hidden_gain, double output_gain) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int l = 0; l < num_layers(); ++l) {
      const int rows = sizes_[l + 1], cols = sizes_[l];
      const bool tall = rows >= cols;
      const int r = tall ? rows : cols, c = tall ? cols : rows;
      MatrixXd g(r, c);
      for (int j = 0; j < c; ++j) {
        for (int i = 0; i < r; ++i) g(i, j) = normal(rng);
      }
      Eigen::HouseholderQR<MatrixXd> qr(g);
      MatrixXd q = qr.householderQ() * MatrixXd::Identity(r, c);
      VectorXd d = qr.matrixQR().diagonal();
      for (int j = 0; j < c; ++j) {
        if (d(j) < 0) q.col(j) = -q.col(j);
      }
      double gain = l + 1 < num_layers() ? hidden_gain : output_gain;
      weight(l) = gain * (tall ? q : MatrixXd(q.transpose()));
      bias(l).setZero();
    }
  }

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
};

class Adam {
 public:
  Adam() = default;
  Adam(Eigen::Index n, double eps, double beta1 = 0.9, double beta2 = 0.999)
      : m_(VectorXd::Zero(n)), v_(VectorXd::Zero(n)), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(VectorXd& params, const VectorXd& grad, double lr) {
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
    v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
    double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    double step_size = lr / c1;
    params.array() -= step_size * m_.array() / ((v_.array() / c2).sqrt() + eps_);
  }

 private:
  VectorXd m_, v_;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
};

}  // namespace relreward::rl

#endif  // RELREWARD_RL_MLP_HPP_
