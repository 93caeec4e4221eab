#pragma once

// PDE residual and the four training loss terms for
//
//   u_t - Laplace(u^3) = g(x, y) u,   g = v  or  g = v1 + v2 sin(sqrt(x^2 + y^2))
//
// on [-3, 3]^2 x [0, 1] with u = 0 on the spatial boundary and the disc patch
// u(0, x, y) = plateau * [x^2 + y^2 < 0.25].

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "tumorpinn/autodiff.hpp"
#include "tumorpinn/jet.hpp"
#include "tumorpinn/network.hpp"

namespace tumorpinn {

struct DomainBox {
  double x_min = -3.0, x_max = 3.0;
  double y_min = -3.0, y_max = 3.0;
  double t_min = 0.0, t_max = 1.0;

  bool contains(const Point3& p) const {
    return p[0] >= t_min && p[0] <= t_max && p[1] >= x_min && p[1] <= x_max && p[2] >= y_min && p[2] <= y_max;
  }
};

/// Squared radius of the initial patch; the circle itself belongs to the outside.
inline constexpr double kPatchRadius2 = 0.25;

/// kDensity: real-valued targets (MSE). kBinary: 0/1 presence labels (BCE).
enum class DataKind { kDensity, kBinary };

struct DataPoint {
  Point3 point;
  double target = 0.0;
};

struct CollocationSet {
  std::vector<Point3> interior;
  std::vector<Point3> boundary;  // 4 edges, target 0
  std::vector<Point3> initial;   // t = 0, target = patch
  std::vector<DataPoint> data;
  DataKind data_kind = DataKind::kDensity;
};

struct SamplingConfig {
  DomainBox box;
  std::size_t n_interior = 2000;
  std::size_t n_per_edge = 100;
  std::size_t n_initial = 100;
  std::size_t n_data = 200;

  void validate() const;
};

/// Uniform interior, boundary (each edge uniform in arc length and t) and
/// initial points. If `observations` holds more than n_data rows a random
/// subset of n_data is kept, otherwise all of them.
CollocationSet sample_collocation(const SamplingConfig& config, std::uint64_t seed,
                                  std::span<const DataPoint> observations = {},
                                  DataKind kind = DataKind::kDensity);

struct LossWeights {
  double w_pde = 1.0;
  double w_ic = 1.0;
  double w_bc = 1.0;
  double w_data = 1.0;

  void validate() const;
};

struct LossBreakdown {
  double pde = 0.0;
  double ic = 0.0;
  double bc = 0.0;
  double data = 0.0;
  double total = 0.0;
};

enum class DataLoss { kMse, kBce };

inline constexpr double kBceClamp = 1e-7;

/// Source coefficient g(x, y) for the given parameter vector.
template <class T>
T growth_rate(ParamMode mode, std::span<const T> phys, double x, double y) {
  if (mode == ParamMode::kSpatialV1V2) return phys[0] + phys[1] * T(std::sin(std::sqrt(x * x + y * y)));
  return phys[0];
}

/// u_t - 6 u |grad u|^2 - 3 u^2 Laplace(u) - g u, i.e. the m = 3 expansion of
/// u_t - Laplace(u^3) - g u.
template <class T>
T residual_expanded(const Jet<T>& u, const T& g) {
  const T& ut = u.grad[kAxisT];
  const T& ux = u.grad[kAxisX];
  const T& uy = u.grad[kAxisY];
  const T lap = u.hess_diag[0] + u.hess_diag[1];
  return ut - T(6.0) * u.value * (ux * ux + uy * uy) - T(3.0) * u.value * u.value * lap - g * u.value;
}

/// Same quantity with Laplace(u^3) taken directly from the jet of u^3.
inline double residual_direct(const Jet2& u, double g) {
  const Jet2 cubed = pow(u, 3);
  return u.grad[kAxisT] - cubed.laplacian() - g * u.value;
}

/// Initial density at (x, y) for a given plateau height.
template <class T>
T initial_density(double x, double y, const T& plateau) {
  return x * x + y * y < kPatchRadius2 ? plateau : T(0.0);
}

double residual(const NetworkParams& net, const PhysicalParams& phys, const Point3& point);

double loss_pde(const NetworkParams& net, const PhysicalParams& phys, const CollocationSet& set);
double loss_ic(const NetworkParams& net, const PhysicalParams& phys, const CollocationSet& set);
double loss_bc(const NetworkParams& net, const CollocationSet& set);
double loss_data_mse(const NetworkParams& net, const CollocationSet& set);
double loss_data_bce(const NetworkParams& net, const CollocationSet& set);

LossBreakdown total_loss(const NetworkParams& net, const PhysicalParams& phys, const CollocationSet& set,
                         const LossWeights& weights, DataLoss data_loss);

// Tape builders used for training; each registers its term on the graph.
Var build_loss_pde(LossGraph& graph, const CollocationSet& set);
Var build_loss_ic(LossGraph& graph, const CollocationSet& set);
Var build_loss_bc(LossGraph& graph, const CollocationSet& set);
Var build_loss_data(LossGraph& graph, const CollocationSet& set, DataLoss data_loss);
Var build_total_loss(LossGraph& graph, const CollocationSet& set, const LossWeights& weights, DataLoss data_loss);

/// Reads the "pde", "ic", "bc", "data" and "total" terms back from an evaluation.
LossBreakdown breakdown_from(const LossEvaluation& eval);

}  // namespace tumorpinn
