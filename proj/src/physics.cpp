#include "tumorpinn/physics.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "tumorpinn/errors.hpp"

namespace tumorpinn {

void SamplingConfig::validate() const {
  if (!(box.x_min < box.x_max && box.y_min < box.y_max && box.t_min < box.t_max)) {
    throw ConfigError("sampling box is empty");
  }
  if (n_interior == 0) throw ConfigError("n_interior must be positive");
  if (n_per_edge == 0) throw ConfigError("n_per_edge must be positive");
  if (n_initial == 0) throw ConfigError("n_initial must be positive");
}

CollocationSet sample_collocation(const SamplingConfig& config, std::uint64_t seed,
                                  std::span<const DataPoint> observations, DataKind kind) {
  config.validate();
  const DomainBox& b = config.box;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto lerp = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  CollocationSet set;
  set.data_kind = kind;
  set.interior.reserve(config.n_interior);
  for (std::size_t i = 0; i < config.n_interior; ++i) {
    const double t = lerp(b.t_min, b.t_max);
    const double x = lerp(b.x_min, b.x_max);
    const double y = lerp(b.y_min, b.y_max);
    set.interior.push_back({t, x, y});
  }

  // left, right, bottom, top
  set.boundary.reserve(4 * config.n_per_edge);
  for (int edge = 0; edge < 4; ++edge) {
    for (std::size_t i = 0; i < config.n_per_edge; ++i) {
      const double t = lerp(b.t_min, b.t_max);
      const double s = unit(rng);
      double x = 0.0, y = 0.0;
      switch (edge) {
        case 0: x = b.x_min; y = b.y_min + s * (b.y_max - b.y_min); break;
        case 1: x = b.x_max; y = b.y_min + s * (b.y_max - b.y_min); break;
        case 2: y = b.y_min; x = b.x_min + s * (b.x_max - b.x_min); break;
        default: y = b.y_max; x = b.x_min + s * (b.x_max - b.x_min); break;
      }
      set.boundary.push_back({t, x, y});
    }
  }

  set.initial.reserve(config.n_initial);
  for (std::size_t i = 0; i < config.n_initial; ++i) {
    const double x = lerp(b.x_min, b.x_max);
    const double y = lerp(b.y_min, b.y_max);
    set.initial.push_back({b.t_min, x, y});
  }

  if (observations.size() > config.n_data && config.n_data > 0) {
    std::vector<std::size_t> idx(observations.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(config.n_data);
    std::sort(idx.begin(), idx.end());
    for (std::size_t i : idx) set.data.push_back(observations[i]);
  } else {
    set.data.assign(observations.begin(), observations.end());
  }
  return set;
}

void LossWeights::validate() const {
  for (double w : {w_pde, w_ic, w_bc, w_data}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("loss weights must be finite and nonnegative");
  }
  if (w_pde == 0.0 && w_ic == 0.0 && w_bc == 0.0 && w_data == 0.0) {
    throw ConfigError("at least one loss weight must be positive");
  }
}

namespace {

Var mean(std::span<const Var> terms) {
  Var sum(0.0);
  for (const Var& v : terms) sum = sum + v;
  return sum / Var(static_cast<double>(terms.size()));
}

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) throw ConfigError(std::string("collocation set has no ") + what + " points");
}

}  // namespace

Var build_loss_pde(LossGraph& graph, const CollocationSet& set) {
  require_nonempty(set.interior.size(), "interior");
  const auto jets = graph.network_jets(set.interior);
  const ParamMode mode = graph.physical_params().mode;
  std::vector<Var> sq;
  sq.reserve(jets.size());
  for (std::size_t i = 0; i < jets.size(); ++i) {
    const Point3& p = set.interior[i];
    const Var g = growth_rate<Var>(mode, graph.physical(), p[1], p[2]);
    const Var r = residual_expanded(jets[i], g);
    sq.push_back(r * r);
  }
  return graph.term("pde", mean(sq));
}

Var build_loss_ic(LossGraph& graph, const CollocationSet& set) {
  require_nonempty(set.initial.size(), "initial");
  const auto u = graph.network_values(set.initial);
  const bool trainable_plateau = graph.physical_params().mode == ParamMode::kVAndA;
  const Var plateau = trainable_plateau ? graph.physical(1) : Var(1.0);
  std::vector<Var> sq;
  sq.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Var d = u[i] - initial_density<Var>(set.initial[i][1], set.initial[i][2], plateau);
    sq.push_back(d * d);
  }
  return graph.term("ic", mean(sq));
}

Var build_loss_bc(LossGraph& graph, const CollocationSet& set) {
  require_nonempty(set.boundary.size(), "boundary");
  const auto u = graph.network_values(set.boundary);
  std::vector<Var> sq;
  sq.reserve(u.size());
  for (const Var& v : u) sq.push_back(v * v);
  return graph.term("bc", mean(sq));
}

Var build_loss_data(LossGraph& graph, const CollocationSet& set, DataLoss data_loss) {
  require_nonempty(set.data.size(), "data");
  if (data_loss == DataLoss::kMse && set.data_kind == DataKind::kBinary) {
    throw ModeError("MSE data loss requested for a binary-labelled observation set");
  }
  if (data_loss == DataLoss::kBce) {
    for (const auto& d : set.data) {
      if (d.target != 0.0 && d.target != 1.0) {
        throw DataError("BCE data loss needs labels in {0, 1}, got " + std::to_string(d.target));
      }
    }
  }
  std::vector<Point3> pts;
  pts.reserve(set.data.size());
  for (const auto& d : set.data) pts.push_back(d.point);
  const auto u = graph.network_values(pts);

  std::vector<Var> terms;
  terms.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double y = set.data[i].target;
    if (data_loss == DataLoss::kMse) {
      const Var d = u[i] - Var(y);
      terms.push_back(d * d);
    } else {
      Var p = u[i];
      if (p.value() < kBceClamp) p = Var(kBceClamp);
      if (p.value() > 1.0 - kBceClamp) p = Var(1.0 - kBceClamp);
      terms.push_back(y == 1.0 ? -log(p) : -log(Var(1.0) - p));
    }
  }
  return graph.term("data", mean(terms));
}

Var build_total_loss(LossGraph& graph, const CollocationSet& set, const LossWeights& weights, DataLoss data_loss) {
  weights.validate();
  const Var pde = build_loss_pde(graph, set);
  const Var ic = build_loss_ic(graph, set);
  const Var bc = build_loss_bc(graph, set);
  const Var data = build_loss_data(graph, set, data_loss);
  const Var total = Var(weights.w_pde) * pde + Var(weights.w_ic) * ic + Var(weights.w_bc) * bc +
                    Var(weights.w_data) * data;
  return graph.term("total", total);
}

LossBreakdown breakdown_from(const LossEvaluation& eval) {
  LossBreakdown b;
  for (const auto& [name, v] : eval.terms) {
    if (name == "pde") b.pde = v;
    else if (name == "ic") b.ic = v;
    else if (name == "bc") b.bc = v;
    else if (name == "data") b.data = v;
    else if (name == "total") b.total = v;
  }
  return b;
}

double residual(const NetworkParams& net, const PhysicalParams& phys, const Point3& point) {
  phys.validate();
  const Jet2 u = eval_with_input_derivs(net, point);
  const double g = growth_rate<double>(phys.mode, phys.values, point[1], point[2]);
  const double r = residual_expanded(u, g);
  if (!std::isfinite(r)) throw NumericalError("residual is not finite");
  return r;
}

namespace {

double value_of(const NetworkParams& net, const PhysicalParams& phys, const LossBuilder& build) {
  return evaluate_loss(net, phys, build, Precision::kFloat64, false).value;
}

PhysicalParams default_phys() { return PhysicalParams{}; }

}  // namespace

double loss_pde(const NetworkParams& net, const PhysicalParams& phys, const CollocationSet& set) {
  return value_of(net, phys, [&](LossGraph& g) { return build_loss_pde(g, set); });
}

double loss_ic(const NetworkParams& net, const PhysicalParams& phys, const CollocationSet& set) {
  return value_of(net, phys, [&](LossGraph& g) { return build_loss_ic(g, set); });
}

double loss_bc(const NetworkParams& net, const CollocationSet& set) {
  return value_of(net, default_phys(), [&](LossGraph& g) { return build_loss_bc(g, set); });
}

double loss_data_mse(const NetworkParams& net, const CollocationSet& set) {
  return value_of(net, default_phys(), [&](LossGraph& g) { return build_loss_data(g, set, DataLoss::kMse); });
}

double loss_data_bce(const NetworkParams& net, const CollocationSet& set) {
  return value_of(net, default_phys(), [&](LossGraph& g) { return build_loss_data(g, set, DataLoss::kBce); });
}

LossBreakdown total_loss(const NetworkParams& net, const PhysicalParams& phys, const CollocationSet& set,
                         const LossWeights& weights, DataLoss data_loss) {
  const LossEvaluation eval = evaluate_loss(
      net, phys, [&](LossGraph& g) { return build_total_loss(g, set, weights, data_loss); }, Precision::kFloat64,
      false);
  return breakdown_from(eval);
}

}  // namespace tumorpinn
