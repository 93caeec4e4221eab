#pragma once

// Derivative engine: input jets of the network at single points, and exact
// parameter gradients of scalar losses built from network jets.
//
// Gradients are reverse-over-forward. A loss builder asks the LossGraph for
// network jets at batches of points; each jet channel becomes a tape leaf.
// After the scalar loss is assembled on the tape, one reverse sweep gives the
// adjoint of every leaf, and the batched network reverse pass maps the channel
// adjoints to the flat network parameters.

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tumorpinn/jet.hpp"
#include "tumorpinn/mlp_batch.hpp"
#include "tumorpinn/network.hpp"
#include "tumorpinn/tape.hpp"

namespace tumorpinn {

/// u(t, x, y) = |net(t, x, y)| with its input derivatives, evaluated one point
/// at a time through the Jet algebra.
Jet2 eval_with_input_derivs(const NetworkParams& net, const Point3& point);

struct ParamGrad {
  std::vector<double> wrt_network;   // aligned with NetworkParams::flatten()
  std::vector<double> wrt_physical;  // aligned with PhysicalParams::values
};

/// Arithmetic used inside the network passes; tape arithmetic is always double.
enum class Precision { kFloat32, kFloat64 };

class LossGraph {
 public:
  LossGraph(const NetworkParams& net, const PhysicalParams& phys, Precision precision);

  Tape& tape() { return tape_; }
  const Var& physical(std::size_t i) const { return physical_.at(i); }
  std::span<const Var> physical() const { return physical_; }
  const PhysicalParams& physical_params() const { return phys_; }

  /// Second-order jets of |net| at every point; each channel is a tape leaf.
  std::vector<Jet<Var>> network_jets(std::span<const Point3> points);
  /// Values only.
  std::vector<Var> network_values(std::span<const Point3> points);

  /// Registers a named partial result so non-finite values can be traced.
  Var term(std::string name, Var v);
  const std::vector<std::pair<std::string, Var>>& terms() const { return terms_; }

  /// Reverse sweep from `loss`; fills both gradient vectors.
  ParamGrad gradient(const Var& loss) const;

 private:
  template <class S>
  struct Request {
    BatchCache<S> cache;
    std::int32_t first_leaf = 0;
  };
  using AnyRequest = std::variant<Request<float>, Request<double>>;

  const std::vector<Var>& leaves_for(std::span<const Point3> points, JetOrder order, std::int32_t& first);

  const NetworkParams& net_;
  PhysicalParams phys_;
  Tape tape_;
  std::vector<Var> physical_;
  std::variant<MlpBatch<float>, MlpBatch<double>> mlp_;
  std::vector<AnyRequest> requests_;
  std::vector<Var> scratch_;
  std::vector<std::pair<std::string, Var>> terms_;
};

using LossBuilder = std::function<Var(LossGraph&)>;

struct LossEvaluation {
  double value = 0.0;
  ParamGrad grad;
  std::vector<std::pair<std::string, double>> terms;
};

/// Builds the loss and (optionally) differentiates it. Throws NumericalError
/// naming the first registered term that is non-finite.
LossEvaluation evaluate_loss(const NetworkParams& net, const PhysicalParams& phys, const LossBuilder& build,
                             Precision precision = Precision::kFloat64, bool with_gradient = true);

/// Exact gradient of the scalar built by `build` w.r.t. every trainable scalar.
ParamGrad loss_param_gradient(const LossBuilder& build, const NetworkParams& net, const PhysicalParams& phys);

}  // namespace tumorpinn
