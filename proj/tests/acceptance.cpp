// Acceptance checks. Usage: acceptance [criterion ...]   (default: all)
// Prints one PASS/FAIL line per criterion; exit status 1 if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tumorpinn/autodiff.hpp"
#include "tumorpinn/checkpoint.hpp"
#include "tumorpinn/obsdata.hpp"
#include "tumorpinn/physics.hpp"
#include "tumorpinn/solver.hpp"
#include "tumorpinn/trainer.hpp"

using namespace tumorpinn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string pct(double e) {
  std::ostringstream os;
  os.precision(3);
  os << 100 * e << "%";
  return os.str();
}

double rel(double a, double b, double floor) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor}); }

// ---- 1: derivative correctness ----

// Five-point central stencils along one input axis.
struct Stencil {
  double d1, d2;
};

Stencil stencil(const NetworkParams& net, Point3 p, int axis, double h) {
  auto f = [&](double s) {
    Point3 q = p;
    q[static_cast<std::size_t>(axis)] += s;
    return forward(net, q);
  };
  const double fm2 = f(-2 * h), fm1 = f(-h), f0 = f(0), fp1 = f(h), fp2 = f(2 * h);
  return {(fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h),
          (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)};
}

Outcome derivative_correctness() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> width(3, 8);
  std::uniform_real_distribution<double> ut(0.05, 0.95), ux(-2.8, 2.8), uv(0.5, 3.5);
  double worst_input = 0.0, worst_param = 0.0;
  int networks = 0;
  for (int k = 0; k < 100; ++k) {
    Architecture arch;
    arch.widths = {3, width(rng), width(rng), 1};
    const NetworkParams net = init_xavier(arch, 100 + static_cast<std::uint64_t>(k));
    ++networks;

    // Input derivatives at interior points away from the |.| kink.
    int taken = 0;
    for (int attempt = 0; attempt < 200 && taken < 5; ++attempt) {
      const Point3 p{ut(rng), ux(rng), ux(rng)};
      const Jet2 j = eval_with_input_derivs(net, p);
      if (std::abs(j.value) < 0.05) continue;
      ++taken;
      const double h = 1e-3;
      for (int axis = 0; axis < 3; ++axis) {
        const Stencil s = stencil(net, p, axis, h);
        worst_input = std::max(worst_input, rel(j.grad[static_cast<std::size_t>(axis)], s.d1, 1e-3));
        if (axis > 0) worst_input = std::max(worst_input, rel(j.hess_diag[static_cast<std::size_t>(axis - 1)], s.d2, 1e-3));
      }
    }

    // Full-loss gradient, every parameter.
    SamplingConfig sc;
    sc.n_interior = 10;
    sc.n_per_edge = 2;
    sc.n_initial = 5;
    std::vector<DataPoint> data;
    const bool bce = k % 2 == 1;
    for (int i = 0; i < 5; ++i) data.push_back({{ut(rng), ux(rng), ux(rng)}, bce ? double(i % 2) : 0.1 * i});
    const auto set = sample_collocation(sc, 7 + static_cast<std::uint64_t>(k), data,
                                        bce ? DataKind::kBinary : DataKind::kDensity);
    PhysicalParams phys;
    phys.mode = static_cast<ParamMode>(k % 3);
    phys.values = phys.mode == ParamMode::kConstantV ? std::vector<double>{uv(rng)}
                                                     : std::vector<double>{uv(rng), 0.5 + 0.25 * uv(rng)};
    const LossWeights w{10.0, 1.0, 1.0, 5.0};
    const LossBuilder build = [&](LossGraph& g) {
      return build_total_loss(g, set, w, bce ? DataLoss::kBce : DataLoss::kMse);
    };
    const ParamGrad grad = loss_param_gradient(build, net, phys);
    auto value = [&](const NetworkParams& n, const PhysicalParams& p) {
      return evaluate_loss(n, p, build, Precision::kFloat64, false).value;
    };
    const double h = 1e-4;
    const auto flat = net.flatten();
    for (std::size_t i = 0; i < flat.size(); ++i) {
      auto at = [&](double s) {
        auto f = flat;
        f[i] += s;
        return value(NetworkParams::unflatten(arch, f), phys);
      };
      const double fd = (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
      worst_param = std::max(worst_param, rel(grad.wrt_network[i], fd, 1e-6));
    }
    for (std::size_t i = 0; i < phys.values.size(); ++i) {
      auto at = [&](double s) {
        auto p = phys;
        p.values[i] += s;
        return value(net, p);
      };
      const double fd = (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
      worst_param = std::max(worst_param, rel(grad.wrt_physical[i], fd, 1e-6));
    }
  }
  std::ostringstream os;
  os << networks << " networks; input derivatives max rel err " << worst_input << " (< 1e-5), parameter gradients "
     << worst_param << " (< 1e-4)";
  return {worst_input < 1e-5 && worst_param < 1e-4, os.str()};
}

// ---- 2: residual identity ----

Outcome residual_identity() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ut(0.0, 1.0), ux(-3.0, 3.0), ug(-2.0, 8.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const NetworkParams net = init_xavier(Architecture{{3, 16, 16, 1}}, 500 + static_cast<std::uint64_t>(k % 50));
    const Jet2 u = eval_with_input_derivs(net, {ut(rng), ux(rng), ux(rng)});
    const double g = ug(rng);
    const double a = residual_expanded(u, g);
    const double b = residual_direct(u, g);
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-12));
  }
  std::ostringstream os;
  os << "1000 evaluations, max rel difference " << worst << " (< 1e-10)";
  return {worst < 1e-10, os.str()};
}

// ---- 3: solver against the Barenblatt profile ----

double barenblatt(double t, double x, double y, double C) {
  const double q = C - (x * x + y * y) / (18.0 * std::cbrt(t));
  return q > 0.0 ? std::sqrt(q) / std::cbrt(t) : 0.0;
}

Outcome solver_oracle() {
  const double C = 0.1, t0 = 1.0, t1 = 2.0;
  std::vector<double> errors, drifts;
  const std::vector<int> sizes{101, 201, 401};
  for (int n : sizes) {
    Grid2D g;
    g.nx = g.ny = n;
    DensityField rho0{g, t0, std::vector<double>(g.size(), 0.0)};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) rho0.values[g.index(i, j)] = barenblatt(t0, g.x(i), g.y(j), C);
    }
    SolveConfig sc;
    sc.source.coeffs = {0.0};
    sc.t_end = t1;
    sc.output_times = {t1};
    const auto res = solve(sc, rho0);
    const auto& f = res.snapshots.back();
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) e += std::abs(f.at(i, j) - barenblatt(t1, g.x(i), g.y(j), C));
    }
    errors.push_back(e * g.hx() * g.hy());
    drifts.push_back(std::abs(f.mass() / rho0.mass() - 1.0));
  }
  const double order1 = std::log2(errors[0] / errors[1]);
  const double order2 = std::log2(errors[1] / errors[2]);
  const double drift = *std::max_element(drifts.begin(), drifts.end());
  std::ostringstream os;
  os << "L1 errors " << errors[0] << ", " << errors[1] << ", " << errors[2] << "; orders " << order1 << ", " << order2
     << " (>= 0.8); max mass drift " << pct(drift) << " (< 0.5%)";
  return {order1 >= 0.8 && order2 >= 0.8 && drift < 5e-3, os.str()};
}

// ---- 4-8: training experiments ----

TrainResult run(const TrainConfig& c, const std::string& label) {
  const auto start = std::chrono::steady_clock::now();
  TrainResult r = train(c);
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "  " << label << ": " << r.epochs_run << " epochs in " << sec << " s\n";
  return r;
}

Outcome synthetic_recovery() {
  TrainConfig c = preset("synthetic-v2.0");
  c.epochs = 30000;
  c.log_every = 1000;
  const TrainResult r = run(c, c.name);
  const double v = r.phys.values[0];
  const double err = std::abs(v - 2.0) / 2.0;
  double v10k = std::nan("");
  for (const auto& rec : r.trajectory) {
    if (rec.epoch == 10000) v10k = rec.phys[0];
  }
  const double err10k = std::abs(v10k - 2.0) / 2.0;
  std::ostringstream os;
  os << "v = " << v << " after 30000 epochs, error " << pct(err) << " (< 5%); v = " << v10k << " at 10000, error "
     << pct(err10k) << " (< 15%)";
  return {err < 0.05 && err10k < 0.15, os.str()};
}

Outcome noise_robustness() {
  const std::vector<std::string> names{"noise-e0.5-s0.2", "noise-e0.5-s0.5", "noise-e0.5-s1"};
  std::vector<double> errs;
  std::ostringstream os;
  os << "eps 0.5:";
  for (const auto& n : names) {
    const TrainConfig c = preset(n);
    const TrainResult r = run(c, n);
    errs.push_back(std::abs(r.phys.values[0] - c.v_true) / c.v_true);
    os << " sigma " << c.noise_sigma << " -> v " << r.phys.values[0] << " (" << pct(errs.back()) << ")";
  }
  bool monotone = true;
  for (std::size_t k = 1; k < errs.size(); ++k) monotone &= errs[k] >= errs[k - 1] / 1.2;
  os << "; lowest noise < 5%: " << (errs[0] < 0.05 ? "yes" : "no") << "; non-decreasing in sigma within 20%: "
     << (monotone ? "yes" : "no");
  return {errs[0] < 0.05 && monotone, os.str()};
}

std::string radius_report(const std::vector<RadiusPrediction>& pred, const RadiusSeries& table, double tol,
                          bool& ok) {
  std::ostringstream os;
  for (const auto& p : pred) {
    const double obs = *table.radius_at(p.t);
    const double e = relative_error(p.radius, obs);
    ok &= e < tol;
    os << " r(" << p.t << ") = " << p.radius << " vs " << obs << " (" << pct(e) << ")";
  }
  return os.str();
}

Outcome real_data() {
  TrainConfig c = preset("real-bce");
  c.epochs = 60000;
  c.log_every = 5000;
  const TrainResult r = run(c, c.name);
  const double v = r.phys.values[0];
  const std::vector<double> times{0.875, 1.0};
  bool ok = v >= 2.7 && v <= 3.5;
  std::ostringstream os;
  os << "v = " << v << " (in [2.7, 3.5]: " << (ok ? "yes" : "no") << ");";
  os << radius_report(predict_forward(r.phys, times), builtin_radius_table(), 0.10, ok) << " (< 10%)";
  return {ok, os.str()};
}

Outcome spatial() {
  TrainConfig c = preset("spatial");
  c.epochs = 60000;
  c.log_every = 5000;
  const TrainResult r = run(c, c.name);
  const std::vector<double> times{0.875, 1.0};
  bool ok = true;
  std::ostringstream os;
  os << "v1 = " << r.phys.values[0] << ", v2 = " << r.phys.values[1] << ";";
  os << radius_report(predict_forward(r.phys, times), builtin_radius_table(), 0.10, ok) << " (< 10%)";
  return {ok, os.str()};
}

Outcome v_and_a() {
  TrainConfig c = preset("v-and-a");
  c.epochs = 60000;
  c.log_every = 5000;
  const TrainResult r = run(c, c.name);
  PhysicalParams unit = r.phys;
  unit.values[1] = 1.0;
  const double ic_a = loss_ic(r.net, r.phys, r.collocation);
  const double ic_1 = loss_ic(r.net, unit, r.collocation);
  bool ok = ic_a <= 0.9 * ic_1;
  std::ostringstream os;
  os << "v = " << r.phys.values[0] << ", a = " << r.phys.values[1] << "; IC loss " << ic_a << " vs " << ic_1
     << " with a = 1 (>= 10% lower: " << (ok ? "yes" : "no") << ");";
  const std::vector<double> held_out{0.625, 0.75, 0.875, 1.0};
  os << radius_report(predict_forward(r.phys, held_out), builtin_radius_table(), 0.15, ok) << " (< 15%)";
  return {ok, os.str()};
}

// ---- 9: determinism ----

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "tumorpinn_acceptance_det";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::vector<std::string> bad;
  for (const auto& name : preset_names()) {
    TrainConfig c = preset(name);
    c.epochs = 60;
    c.log_every = 10;
    const std::string header = metadata_header(c.canonical());
    const TrainResult a = train(c);
    const TrainResult b = train(c);
    write_trajectory_csv(dir / "a.csv", a.trajectory, a.phys.names(), header);
    write_trajectory_csv(dir / "b.csv", b.trajectory, b.phys.names(), header);
    const bool same_csv = slurp(dir / "a.csv") == slurp(dir / "b.csv");

    TrainConfig half = c;
    half.epochs = 30;
    TrainOptions first;
    first.checkpoint_path = dir / "ck.json";
    first.checkpoint_every = 30;
    train(half, first);
    const Checkpoint ck = load_checkpoint(first.checkpoint_path);
    TrainOptions second;
    second.resume_from = &ck;
    const TrainResult resumed = train(c, second);
    const bool same_resume = resumed.net.flatten() == a.net.flatten() && resumed.phys.values == a.phys.values &&
                             resumed.trajectory.back().loss.total == a.trajectory.back().loss.total;
    if (!same_csv) bad.push_back(name + " (trajectory.csv differs)");
    if (!same_resume) bad.push_back(name + " (resume differs)");
  }
  std::filesystem::remove_all(dir);
  std::ostringstream os;
  os << preset_names().size() << " presets, 60 epochs each: rerun bytes identical and 30+30 resume == 60";
  for (const auto& b : bad) os << "; " << b;
  return {bad.empty(), os.str()};
}

// ---- 10: loss decrease ----

Outcome loss_decrease() {
  std::ostringstream os;
  bool ok = true;
  for (const auto& name : preset_names()) {
    TrainConfig c = preset(name);
    c.epochs = 500;
    c.log_every = 500;
    const TrainResult r = train(c);
    const double first = r.trajectory.front().loss.total, last = r.trajectory.back().loss.total;
    ok &= last < first;
    os << ' ' << name << ' ' << first << "->" << last << (last < first ? "" : " (NOT lower)") << ';';
  }
  return {ok, "500 epochs per preset:" + os.str()};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "derivative correctness", derivative_correctness},
      {2, "residual identity", residual_identity},
      {3, "solver oracle", solver_oracle},
      {4, "synthetic recovery", synthetic_recovery},
      {5, "noise robustness", noise_robustness},
      {6, "real-data pipeline", real_data},
      {7, "spatial mode", spatial},
      {8, "v_and_a mode", v_and_a},
      {9, "determinism", determinism},
      {10, "loss decrease", loss_decrease},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  if (wanted.empty()) {
    for (const auto& c : all) wanted.push_back(c.id);
  }
  bool all_pass = true;
  for (int id : wanted) {
    const auto it = std::find_if(all.begin(), all.end(), [&](const Criterion& c) { return c.id == id; });
    if (it == all.end()) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << it->title << ": " << o.detail << " ["
         << static_cast<int>(sec) << " s]";
    std::cout << line.str() << std::endl;
    std::ofstream("acceptance_results.txt", std::ios::app) << line.str() << '\n';
    all_pass &= o.pass;
  }
  return all_pass ? 0 : 1;
}
