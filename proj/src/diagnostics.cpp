#include "tumorpinn/diagnostics.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "tumorpinn/autodiff.hpp"
#include "tumorpinn/network.hpp"
#include "tumorpinn/obsdata.hpp"
#include "tumorpinn/physics.hpp"
#include "tumorpinn/solver.hpp"

namespace tumorpinn {

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3}); }

CheckResult input_derivative_check(std::uint64_t seed) {
  Architecture arch{{3, 8, 8, 1}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), ut(0.0, 1.0);
  const double h = 1e-4;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const NetworkParams net = init_xavier(arch, seed + static_cast<std::uint64_t>(trial));
    Point3 p{ut(rng), ux(rng), ux(rng)};
    const Jet2 j = eval_with_input_derivs(net, p);
    if (std::abs(j.value) < 1e-3) continue;  // stay away from the |.| kink
    for (int axis = 0; axis < 3; ++axis) {
      Point3 a = p, b = p;
      a[axis] += h;
      b[axis] -= h;
      const double fa = forward(net, a), fb = forward(net, b), f0 = forward(net, p);
      worst = std::max(worst, rel_err(j.grad[axis], (fa - fb) / (2 * h)));
      if (axis > 0) worst = std::max(worst, rel_err(j.hess_diag[axis - 1], (fa - 2 * f0 + fb) / (h * h)));
    }
  }
  std::ostringstream os;
  os << "max relative error " << worst;
  return {"input jets vs central differences", worst < 1e-4, os.str()};
}

CheckResult residual_identity_check(std::uint64_t seed) {
  Architecture arch{{3, 16, 16, 1}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), ut(0.0, 1.0), uv(0.5, 4.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const NetworkParams net = init_xavier(arch, seed + 1000 + static_cast<std::uint64_t>(trial));
    const Point3 p{ut(rng), ux(rng), ux(rng)};
    const double v = uv(rng);
    const Jet2 u = eval_with_input_derivs(net, p);
    const double a = residual_expanded(u, v);
    const double b = residual_direct(u, v);
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-12));
  }
  std::ostringstream os;
  os << "max relative difference " << worst;
  return {"expanded residual == u_t - Lap(u^3) - v u", worst < 1e-10, os.str()};
}

CheckResult solver_symmetry_check() {
  Grid2D g;
  g.nx = g.ny = 61;
  SolveConfig sc;
  sc.source.coeffs = {2.0};
  sc.t_end = 0.05;
  sc.output_times = {0.05};
  const auto res = solve(sc, patch_initial(g, 1.0));
  const auto& f = res.snapshots.back();
  double worst = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) worst = std::max(worst, std::abs(f.at(i, j) - f.at(j, i)));
  }
  std::ostringstream os;
  os << "max |rho(x,y) - rho(y,x)| = " << worst;
  return {"solver preserves x<->y symmetry", worst < 1e-12, os.str()};
}

CheckResult solver_positivity_check() {
  Grid2D g;
  g.nx = g.ny = 61;
  SolveConfig sc;
  sc.source.coeffs = {3.0};
  sc.t_end = 0.1;
  sc.output_times = {0.1};
  const auto res = solve(sc, patch_initial(g, 1.0));
  double minv = 0.0;
  for (double v : res.snapshots.back().values) minv = std::min(minv, v);
  std::ostringstream os;
  os << "min density " << minv << ", clipped mass " << res.clipped_mass;
  return {"solver keeps density nonnegative", minv >= 0.0, os.str()};
}

CheckResult label_scale_check(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), ur(0.1, 2.5), uk(0.1, 1.0);
  int mismatches = 0;
  for (int n = 0; n < 10000; ++n) {
    const double x = ux(rng), y = ux(rng), R = ur(rng), k = uk(rng);
    if (presence_label(x, y, R) != presence_label(k * x, k * y, k * R)) ++mismatches;
  }
  // Scaling changes rounding only right at the disc edge.
  return {"presence labels are scale consistent", mismatches <= 2, std::to_string(mismatches) + " mismatches"};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
  return {input_derivative_check(seed), residual_identity_check(seed), solver_symmetry_check(),
          solver_positivity_check(), label_scale_check(seed)};
}

}  // namespace tumorpinn
