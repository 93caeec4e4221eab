#pragma once

// Batched second-order jet propagation through the density network, plus the
// matching reverse pass that turns adjoints of the output jet channels into a
// gradient over the flat network parameters.
//
// Activations of a batch of B points are stored as n x (C*B) matrices whose
// column blocks are the channels
//   [value | d/dt | d/dx | d/dy | d2/dx2 | d2/dy2]
// (C = 6), or only the value block (C = 1). Every dense layer is then one GEMM
// over all channels; the bias only enters the value block.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "tumorpinn/network.hpp"

namespace tumorpinn {

enum class JetOrder { kValue = 1, kSecond = 6 };

inline int channel_count(JetOrder order) { return static_cast<int>(order); }

enum JetChannel : int { kChValue = 0, kChT = 1, kChX = 2, kChY = 3, kChXX = 4, kChYY = 5 };

template <class S>
struct BatchCache {
  using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  JetOrder order = JetOrder::kValue;
  Eigen::Index batch = 0;
  std::vector<Matrix> inputs;       // input of each layer (inputs[0] is the seeded (t,x,y) jet)
  std::vector<Matrix> preacts;      // pre-activation of each hidden layer
  Matrix raw;                       // 1 x (C*B), output before |.|
  Eigen::Array<S, 1, Eigen::Dynamic> sign;  // +-1 per point

  int channels() const { return channel_count(order); }
  /// Channel `ch` of |raw| at point i.
  S output(int ch, Eigen::Index i) const { return sign(i) * raw(0, ch * batch + i); }
};

template <class S>
class MlpBatch {
 public:
  using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

  explicit MlpBatch(const NetworkParams& net);

  BatchCache<S> forward(std::span<const Point3> points, JetOrder order) const;

  /// grad += d(sum_i sum_c adjoint(c, i) * output_c(i)) / d(theta), flat layout.
  /// `adjoint` is channels x batch.
  void backward(const BatchCache<S>& cache, const Eigen::MatrixXd& adjoint, std::span<double> grad) const;

  std::size_t parameter_count() const { return param_count_; }

 private:
  std::vector<Matrix> weights_;
  std::vector<Vector> biases_;
  std::size_t param_count_ = 0;
};

extern template class MlpBatch<float>;
extern template class MlpBatch<double>;

}  // namespace tumorpinn
