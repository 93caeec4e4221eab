#include "tumorpinn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "json.hpp"
#include "tumorpinn/errors.hpp"
#include "tumorpinn/obsdata.hpp"
#include "tumorpinn/solver.hpp"

namespace tumorpinn {

Checkpoint TrainResult::checkpoint(const TrainConfig& config) const {
  return Checkpoint{config.init_seed, epochs_run, net, phys, optim, config_hash(config.canonical())};
}

ObservationFile prepare_observations(const TrainConfig& config) {
  if (!config.data_file.empty()) {
    ObservationFile f = read_observations_csv(config.data_file);
    if (config.data_loss() == DataLoss::kBce && f.kind != DataKind::kBinary) {
      throw DataError(config.data_file + ": binary mode needs a t,x,y,label file");
    }
    if (config.data_loss() == DataLoss::kMse && f.kind != DataKind::kDensity) {
      throw DataError(config.data_file + ": synthetic mode needs a t,x,y,value file");
    }
    return f;
  }
  ObservationFile out;
  if (config.mode == ExperimentMode::kSyntheticMse) {
    SolveConfig sc;
    sc.source.mode = ParamMode::kConstantV;
    sc.source.coeffs = {config.v_true};
    sc.t_end = *std::max_element(config.snapshot_times.begin(), config.snapshot_times.end());
    sc.cfl = config.solver_cfl;
    Grid2D grid;
    grid.nx = grid.ny = config.solver_nx;
    SyntheticSampleSpec spec;
    spec.n_points = config.sampling.n_data;
    spec.snapshot_times = config.snapshot_times;
    out.points = synthetic_dataset(sc, grid, spec, config.data_seed);
    out.points = add_noise(out.points, config.noise_eps, config.noise_sigma, config.noise_seed);
    out.kind = DataKind::kDensity;
    return out;
  }
  const RadiusSeries series = config.radius_file.empty() ? builtin_radius_table() : read_radius_csv(config.radius_file);
  const auto obs = make_binary_dataset(series, config.train_times, config.sampling.n_data, config.data_seed,
                                       config.binary_sampling, config.sampling.box);
  out.points = to_data_points(obs);
  out.kind = DataKind::kBinary;
  return out;
}

namespace {

std::uint64_t epoch_seed(std::uint64_t base, std::int64_t epoch) {
  // splitmix64 finaliser over (base, epoch)
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(epoch + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

TrainResult train(const TrainConfig& config, const TrainOptions& options) {
  config.validate();
#if defined(__GLIBC__)
  // The jet batches are a few MB each; keep them on the heap instead of
  // paying for fresh mmap pages every epoch.
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
#endif
  const ObservationFile obs = prepare_observations(config);
  const DataLoss data_loss = config.data_loss();

  TrainResult res;
  const Checkpoint* resume = options.resume_from;
  if (resume) {
    res.net = resume->net;
    res.phys = resume->phys;
    res.optim = resume->optim;
    res.epochs_run = resume->epoch;
    if (res.phys.mode != config.param_mode()) throw ConfigError("checkpoint parameter mode does not match config");
    if (res.net.arch.widths != config.arch.widths) throw ConfigError("checkpoint architecture does not match config");
  } else {
    res.net = init_xavier(config.arch, config.init_seed);
    res.phys = config.initial_physical();
    res.optim = OptimState(config.optim, res.net.parameter_count() + res.phys.values.size());
  }
  const std::size_t n_net = res.net.parameter_count();
  const std::size_t n_phys = res.phys.values.size();

  auto sample = [&](std::int64_t epoch) {
    const std::uint64_t seed = config.resample_each_epoch ? epoch_seed(config.sampling_seed, epoch) : config.sampling_seed;
    return sample_collocation(config.sampling, seed, obs.points, obs.kind);
  };
  res.collocation = sample(res.epochs_run);

  std::vector<double> flat = res.net.flatten();
  flat.insert(flat.end(), res.phys.values.begin(), res.phys.values.end());
  std::vector<double> grads(flat.size(), 0.0);

  Checkpoint last_good = res.checkpoint(config);
  std::deque<std::vector<double>> history;

  auto evaluate = [&](bool with_gradient) {
    return evaluate_loss(
        res.net, res.phys,
        [&](LossGraph& g) { return build_total_loss(g, res.collocation, config.weights, data_loss); },
        config.precision, with_gradient);
  };
  auto record = [&](std::int64_t epoch, const LossEvaluation& eval) {
    TrainRecord r{epoch, breakdown_from(eval), res.phys.values, current_lr(res.optim)};
    if (options.on_record) options.on_record(r);
    res.trajectory.push_back(std::move(r));
  };
  auto fail = [&](const std::string& what) {
    if (!options.checkpoint_path.empty()) save_checkpoint(last_good, options.checkpoint_path);
    throw NumericalError("training aborted at epoch " + std::to_string(res.epochs_run) + ": " + what +
                         (options.checkpoint_path.empty() ? "" : " (last good state saved)"));
  };

  while (res.epochs_run < config.epochs) {
    const std::int64_t epoch = res.epochs_run;
    if (config.resample_each_epoch) res.collocation = sample(epoch);

    LossEvaluation eval;
    try {
      eval = evaluate(true);
    } catch (const NumericalError& e) {
      fail(e.what());
    }
    if (epoch % config.log_every == 0) record(epoch, eval);

    std::copy(eval.grad.wrt_network.begin(), eval.grad.wrt_network.end(), grads.begin());
    std::copy(eval.grad.wrt_physical.begin(), eval.grad.wrt_physical.end(), grads.begin() + static_cast<long>(n_net));
    try {
      step(res.optim, flat, grads);
    } catch (const NumericalError& e) {
      fail(e.what());
    }
    res.net.assign(std::span<const double>(flat.data(), n_net));
    std::copy(flat.begin() + static_cast<long>(n_net), flat.end(), res.phys.values.begin());
    res.epochs_run = epoch + 1;
    last_good = res.checkpoint(config);

    if (!options.checkpoint_path.empty() && options.checkpoint_every > 0 &&
        res.epochs_run % options.checkpoint_every == 0) {
      save_checkpoint(last_good, options.checkpoint_path);
    }

    if (config.early_stop) {
      history.push_back(res.phys.values);
      if (static_cast<std::int64_t>(history.size()) > config.early_stop_window) {
        const auto& old = history.front();
        double change = 0.0;
        for (std::size_t k = 0; k < n_phys; ++k) {
          change = std::max(change, std::abs(res.phys.values[k] - old[k]) / std::max(std::abs(old[k]), 1e-12));
        }
        history.pop_front();
        if (change < config.early_stop_tol) {
          res.early_stopped = true;
          break;
        }
      }
    }
  }

  try {
    record(res.epochs_run, evaluate(false));
  } catch (const NumericalError& e) {
    fail(e.what());
  }
  if (!options.checkpoint_path.empty()) save_checkpoint(res.checkpoint(config), options.checkpoint_path);
  return res;
}

MultiStartResult multi_start(const TrainConfig& config, std::span<const std::vector<double>> guesses,
                             const TrainOptions& options) {
  if (guesses.empty()) throw ConfigError("multi-start needs at least one initial guess");
  MultiStartResult out;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& g : guesses) {
    TrainConfig c = config;
    c.initial_guess = g;
    TrainResult r = train(c, options);
    lo = std::min(lo, r.phys.values.front());
    hi = std::max(hi, r.phys.values.front());
    out.finals.push_back(r.phys);
    out.runs.push_back(std::move(r));
  }
  out.spread = hi - lo;
  return out;
}

std::vector<NoiseSweepEntry> noise_sweep(const TrainConfig& base, std::span<const std::pair<double, double>> pairs,
                                         const TrainOptions& options) {
  if (pairs.empty()) throw ConfigError("noise sweep needs at least one (eps, sigma) pair");
  if (base.mode != ExperimentMode::kSyntheticMse) throw ConfigError("noise sweep runs on synthetic_mse configs");
  std::vector<NoiseSweepEntry> out;
  for (const auto& [eps, sigma] : pairs) {
    TrainConfig c = base;
    c.noise_eps = eps;
    c.noise_sigma = sigma;
    NoiseSweepEntry e;
    e.eps = eps;
    e.sigma = sigma;
    e.result = train(c, options);
    for (const auto& r : e.result.trajectory) {
      e.error_curve.emplace_back(r.epoch, relative_error(r.phys.front(), base.v_true));
    }
    e.final_error = relative_error(e.result.phys.values.front(), base.v_true);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<RadiusPrediction> predict_forward(const PhysicalParams& phys, std::span<const double> times,
                                              const ForwardOptions& options) {
  phys.validate();
  if (times.empty()) return {};
  SolveConfig sc;
  sc.m = options.m;
  sc.cfl = options.cfl;
  sc.source.mode = phys.mode == ParamMode::kSpatialV1V2 ? ParamMode::kSpatialV1V2 : ParamMode::kConstantV;
  sc.source.coeffs = phys.mode == ParamMode::kSpatialV1V2 ? phys.values : std::vector<double>{phys.values[0]};
  sc.plateau = phys.mode == ParamMode::kVAndA ? phys.values[1] : 1.0;
  sc.output_times.assign(times.begin(), times.end());
  sc.t_end = *std::max_element(times.begin(), times.end());
  if (!(sc.t_end > 0.0)) sc.t_end = 1.0;
  Grid2D grid;
  grid.nx = grid.ny = options.nx;
  const SolveResult res = solve(sc, patch_initial(grid, sc.plateau));
  std::vector<RadiusPrediction> out;
  for (const auto& f : res.snapshots) out.push_back({f.t, extract_radius(f, options.threshold).radius});
  // report in the caller's order
  std::vector<RadiusPrediction> ordered;
  for (double t : times) {
    const auto it = std::find_if(out.begin(), out.end(), [&](const RadiusPrediction& p) { return p.t == t; });
    ordered.push_back(*it);
  }
  return ordered;
}

void write_trajectory_csv(const std::filesystem::path& path, const std::vector<TrainRecord>& records,
                          const std::vector<std::string>& phys_names, const std::string& header) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << header << "epoch,loss_pde,loss_ic,loss_bc,loss_data,loss_total";
  for (const auto& n : phys_names) os << ',' << n;
  os << ",lr\n" << std::setprecision(17);
  for (const auto& r : records) {
    os << r.epoch << ',' << r.loss.pde << ',' << r.loss.ic << ',' << r.loss.bc << ',' << r.loss.data << ','
       << r.loss.total;
    for (double v : r.phys) os << ',' << v;
    os << ',' << r.lr << '\n';
  }
}

void write_final_json(const std::filesystem::path& path, const TrainConfig& config, const TrainResult& result) {
  nlohmann::json params;
  const auto names = result.phys.names();
  for (std::size_t k = 0; k < names.size(); ++k) params[names[k]] = result.phys.values[k];
  nlohmann::json j = {
      {"meta", {{"tool", "tumorpinn"}, {"version", kToolVersion}, {"config_hash", config_hash(config.canonical())}}},
      {"preset", config.name},
      {"mode", to_string(config.mode)},
      {"param_mode", to_string(result.phys.mode)},
      {"parameters", params},
      {"values", result.phys.values},
      {"epochs", result.epochs_run},
      {"early_stopped", result.early_stopped},
  };
  if (!result.trajectory.empty()) {
    const auto& last = result.trajectory.back();
    j["final_loss"] = {{"pde", last.loss.pde}, {"ic", last.loss.ic}, {"bc", last.loss.bc},
                       {"data", last.loss.data}, {"total", last.loss.total}};
  }
  if (config.mode == ExperimentMode::kSyntheticMse) j["v_true"] = config.v_true;
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
}

}  // namespace tumorpinn
