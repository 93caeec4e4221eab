#include "tumorpinn/mlp_batch.hpp"

#include "tumorpinn/errors.hpp"

namespace tumorpinn {

template <class S>
MlpBatch<S>::MlpBatch(const NetworkParams& net) {
  net.validate();
  for (const auto& L : net.layers) {
    weights_.push_back(L.weight.cast<S>());
    biases_.push_back(L.bias.cast<S>());
  }
  param_count_ = net.parameter_count();
}

namespace {

// z = tanh(a) on every channel block of A.
template <class S>
void tanh_jet_forward(const Eigen::Matrix<S, -1, -1>& A, Eigen::Matrix<S, -1, -1>& Z, int C, Eigen::Index B) {
  Z.resize(A.rows(), A.cols());
  auto a0 = A.leftCols(B).array();
  auto z0 = Z.leftCols(B).array();
  z0 = a0.tanh();
  if (C == 1) return;
  const Eigen::Array<S, -1, -1> d1 = S(1) - z0.square();
  const Eigen::Array<S, -1, -1> d2 = S(-2) * z0 * d1;
  auto blk = [&](Eigen::Matrix<S, -1, -1>& M, int c) { return M.middleCols(c * B, B).array(); };
  auto cblk = [&](const Eigen::Matrix<S, -1, -1>& M, int c) { return M.middleCols(c * B, B).array(); };
  blk(Z, kChT) = d1 * cblk(A, kChT);
  blk(Z, kChX) = d1 * cblk(A, kChX);
  blk(Z, kChY) = d1 * cblk(A, kChY);
  blk(Z, kChXX) = d1 * cblk(A, kChXX) + d2 * cblk(A, kChX).square();
  blk(Z, kChYY) = d1 * cblk(A, kChYY) + d2 * cblk(A, kChY).square();
}

// Given G = dL/dZ on every channel, overwrite it with dL/dA.
template <class S>
void tanh_jet_backward(const Eigen::Matrix<S, -1, -1>& A, const Eigen::Matrix<S, -1, -1>& Z,
                       Eigen::Matrix<S, -1, -1>& G, int C, Eigen::Index B) {
  const auto z = Z.leftCols(B).array();
  const Eigen::Array<S, -1, -1> d1 = S(1) - z.square();
  if (C == 1) {
    G.leftCols(B).array() *= d1;
    return;
  }
  const Eigen::Array<S, -1, -1> d2 = S(-2) * z * d1;
  auto g = [&](int c) { return G.middleCols(c * B, B).array(); };
  auto a = [&](int c) { return A.middleCols(c * B, B).array(); };

  // Sensitivities of the tanh derivative factors, gathered before G is overwritten.
  const Eigen::Array<S, -1, -1> gd1 =
      g(kChT) * a(kChT) + g(kChX) * a(kChX) + g(kChY) * a(kChY) + g(kChXX) * a(kChXX) + g(kChYY) * a(kChYY);
  const Eigen::Array<S, -1, -1> gd2 = g(kChXX) * a(kChX).square() + g(kChYY) * a(kChY).square();

  g(kChValue) = g(kChValue) * d1 + gd1 * d2 + gd2 * (S(-2) * d1.square() - S(2) * z * d2);
  g(kChT) *= d1;
  g(kChX) = d1 * g(kChX) + S(2) * d2 * a(kChX) * g(kChXX);
  g(kChY) = d1 * g(kChY) + S(2) * d2 * a(kChY) * g(kChYY);
  g(kChXX) *= d1;
  g(kChYY) *= d1;
}

}  // namespace

template <class S>
BatchCache<S> MlpBatch<S>::forward(std::span<const Point3> points, JetOrder order) const {
  BatchCache<S> cache;
  cache.order = order;
  const Eigen::Index B = static_cast<Eigen::Index>(points.size());
  const int C = channel_count(order);
  cache.batch = B;

  Matrix Z0 = Matrix::Zero(3, C * B);
  for (Eigen::Index i = 0; i < B; ++i) {
    for (int k = 0; k < 3; ++k) Z0(k, i) = static_cast<S>(points[static_cast<std::size_t>(i)][k]);
    if (C > 1) {
      Z0(0, kChT * B + i) = S(1);
      Z0(1, kChX * B + i) = S(1);
      Z0(2, kChY * B + i) = S(1);
    }
  }
  cache.inputs.push_back(std::move(Z0));

  const std::size_t L = weights_.size();
  for (std::size_t l = 0; l < L; ++l) {
    Matrix A = weights_[l] * cache.inputs[l];
    A.leftCols(B).colwise() += biases_[l];
    if (l + 1 < L) {
      Matrix Z;
      tanh_jet_forward<S>(A, Z, C, B);
      cache.preacts.push_back(std::move(A));
      cache.inputs.push_back(std::move(Z));
    } else {
      cache.raw = std::move(A);
    }
  }
  cache.sign.resize(B);
  for (Eigen::Index i = 0; i < B; ++i) cache.sign(i) = cache.raw(0, i) < S(0) ? S(-1) : S(1);
  return cache;
}

template <class S>
void MlpBatch<S>::backward(const BatchCache<S>& cache, const Eigen::MatrixXd& adjoint, std::span<double> grad) const {
  const Eigen::Index B = cache.batch;
  const int C = cache.channels();
  if (adjoint.rows() != C || adjoint.cols() != B) {
    throw ConfigError("MlpBatch::backward: adjoint shape does not match the cached batch");
  }
  if (grad.size() != param_count_) throw ConfigError("MlpBatch::backward: gradient buffer has wrong length");

  Matrix G(1, C * B);
  for (int c = 0; c < C; ++c) {
    for (Eigen::Index i = 0; i < B; ++i) G(0, c * B + i) = cache.sign(i) * static_cast<S>(adjoint(c, i));
  }

  // Flat offsets of each layer.
  const std::size_t L = weights_.size();
  std::vector<std::size_t> offset(L + 1, 0);
  for (std::size_t l = 0; l < L; ++l) {
    offset[l + 1] = offset[l] + static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
  }

  for (std::size_t l = L; l-- > 0;) {
    const Matrix dW = G * cache.inputs[l].transpose();
    const Vector db = G.leftCols(B).rowwise().sum();
    std::size_t k = offset[l];
    for (Eigen::Index r = 0; r < dW.rows(); ++r) {
      for (Eigen::Index c = 0; c < dW.cols(); ++c) grad[k++] += static_cast<double>(dW(r, c));
    }
    for (Eigen::Index r = 0; r < db.size(); ++r) grad[k++] += static_cast<double>(db(r));
    if (l == 0) break;
    Matrix GZ = weights_[l].transpose() * G;
    tanh_jet_backward<S>(cache.preacts[l - 1], cache.inputs[l], GZ, C, B);
    G = std::move(GZ);
  }
}

template class MlpBatch<float>;
template class MlpBatch<double>;

}  // namespace tumorpinn
