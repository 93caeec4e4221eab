#include "tumorpinn/autodiff.hpp"

#include <cmath>

#include "tumorpinn/errors.hpp"

namespace tumorpinn {

Jet2 eval_with_input_derivs(const NetworkParams& net, const Point3& point) {
  net.validate();
  std::vector<Jet2> z{Jet2::variable(point[0], kAxisT), Jet2::variable(point[1], kAxisX),
                      Jet2::variable(point[2], kAxisY)};
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& L = net.layers[l];
    std::vector<Jet2> next;
    next.reserve(static_cast<std::size_t>(L.weight.rows()));
    for (Eigen::Index r = 0; r < L.weight.rows(); ++r) {
      Jet2 a(L.bias(r));
      for (Eigen::Index c = 0; c < L.weight.cols(); ++c) a = a + L.weight(r, c) * z[static_cast<std::size_t>(c)];
      next.push_back(l + 1 < net.layers.size() ? tanh(a) : abs(a));
    }
    z = std::move(next);
  }
  return z.front();
}

LossGraph::LossGraph(const NetworkParams& net, const PhysicalParams& phys, Precision precision)
    : net_(net),
      phys_(phys),
      mlp_(precision == Precision::kFloat32
               ? std::variant<MlpBatch<float>, MlpBatch<double>>(std::in_place_index<0>, net)
               : std::variant<MlpBatch<float>, MlpBatch<double>>(std::in_place_index<1>, net)) {
  phys_.validate();
  for (double v : phys_.values) physical_.push_back(tape_.leaf(v));
}

const std::vector<Var>& LossGraph::leaves_for(std::span<const Point3> points, JetOrder order, std::int32_t& first) {
  const int C = channel_count(order);
  first = static_cast<std::int32_t>(tape_.size());
  scratch_.clear();
  scratch_.reserve(points.size() * static_cast<std::size_t>(C));
  std::visit(
      [&](const auto& mlp) {
        using S = typename std::decay_t<decltype(mlp)>::Matrix::Scalar;
        Request<S> req;
        req.cache = mlp.forward(points, order);
        req.first_leaf = first;
        for (Eigen::Index i = 0; i < req.cache.batch; ++i) {
          for (int c = 0; c < C; ++c) scratch_.push_back(tape_.leaf(static_cast<double>(req.cache.output(c, i))));
        }
        requests_.emplace_back(std::move(req));
      },
      mlp_);
  return scratch_;
}

std::vector<Jet<Var>> LossGraph::network_jets(std::span<const Point3> points) {
  std::int32_t first = 0;
  const auto& leaves = leaves_for(points, JetOrder::kSecond, first);
  std::vector<Jet<Var>> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Var* p = &leaves[i * 6];
    Jet<Var>& j = out[i];
    j.value = p[kChValue];
    j.grad = {p[kChT], p[kChX], p[kChY]};
    j.hess_diag = {p[kChXX], p[kChYY]};
  }
  return out;
}

std::vector<Var> LossGraph::network_values(std::span<const Point3> points) {
  std::int32_t first = 0;
  return leaves_for(points, JetOrder::kValue, first);
}

Var LossGraph::term(std::string name, Var v) {
  terms_.emplace_back(std::move(name), v);
  return v;
}

ParamGrad LossGraph::gradient(const Var& loss) const {
  ParamGrad g;
  g.wrt_network.assign(net_.parameter_count(), 0.0);
  g.wrt_physical.assign(physical_.size(), 0.0);
  const std::vector<double> adj = tape_.adjoints(loss);
  for (std::size_t k = 0; k < physical_.size(); ++k) {
    g.wrt_physical[k] = adj[static_cast<std::size_t>(physical_[k].index())];
  }
  for (const auto& any : requests_) {
    std::visit(
        [&](const auto& req) {
          const int C = req.cache.channels();
          const Eigen::Index B = req.cache.batch;
          Eigen::MatrixXd seed(C, B);
          for (Eigen::Index i = 0; i < B; ++i) {
            for (int c = 0; c < C; ++c) {
              seed(c, i) = adj[static_cast<std::size_t>(req.first_leaf) + static_cast<std::size_t>(i * C + c)];
            }
          }
          std::visit(
              [&](const auto& mlp) {
                using S1 = typename std::decay_t<decltype(mlp)>::Matrix::Scalar;
                using S2 = typename std::decay_t<decltype(req.cache)>::Matrix::Scalar;
                if constexpr (std::is_same_v<S1, S2>) mlp.backward(req.cache, seed, g.wrt_network);
              },
              mlp_);
        },
        any);
  }
  return g;
}

LossEvaluation evaluate_loss(const NetworkParams& net, const PhysicalParams& phys, const LossBuilder& build,
                             Precision precision, bool with_gradient) {
  LossGraph graph(net, phys, precision);
  const Var loss = build(graph);
  LossEvaluation out;
  out.value = loss.value();
  for (const auto& [name, v] : graph.terms()) out.terms.emplace_back(name, v.value());
  if (!std::isfinite(out.value)) {
    for (const auto& [name, v] : out.terms) {
      if (!std::isfinite(v)) throw NumericalError("non-finite value in loss term '" + name + "'");
    }
    throw NumericalError("loss value is not finite");
  }
  if (with_gradient) {
    out.grad = graph.gradient(loss);
    for (double g : out.grad.wrt_physical) {
      if (!std::isfinite(g)) throw NumericalError("non-finite gradient w.r.t. a physical parameter");
    }
    for (double g : out.grad.wrt_network) {
      if (!std::isfinite(g)) throw NumericalError("non-finite gradient w.r.t. a network parameter");
    }
  }
  return out;
}

ParamGrad loss_param_gradient(const LossBuilder& build, const NetworkParams& net, const PhysicalParams& phys) {
  return evaluate_loss(net, phys, build, Precision::kFloat64, true).grad;
}

}  // namespace tumorpinn
