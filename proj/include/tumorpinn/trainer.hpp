#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tumorpinn/checkpoint.hpp"
#include "tumorpinn/config.hpp"
#include "tumorpinn/csv.hpp"
#include "tumorpinn/physics.hpp"

namespace tumorpinn {

struct TrainRecord {
  std::int64_t epoch = 0;
  LossBreakdown loss;
  std::vector<double> phys;
  double lr = 0.0;
};

struct TrainOptions {
  std::filesystem::path checkpoint_path;  // empty: no periodic checkpoints
  std::int64_t checkpoint_every = 0;
  const Checkpoint* resume_from = nullptr;
  std::function<void(const TrainRecord&)> on_record;
};

struct TrainResult {
  NetworkParams net;
  PhysicalParams phys;
  OptimState optim;
  std::vector<TrainRecord> trajectory;
  std::int64_t epochs_run = 0;  // epoch counter at exit
  bool early_stopped = false;
  CollocationSet collocation;

  Checkpoint checkpoint(const TrainConfig& config) const;
};

/// Training observations: the data file when given, otherwise generated
/// (solver + optional noise for synthetic_mse, radius table labels for the
/// binary modes). Fails with IoError/DataError before any training.
ObservationFile prepare_observations(const TrainConfig& config);

/// Joint RAdam minimisation of the weighted loss over network and physical
/// parameters for config.epochs epochs. Records are taken every log_every
/// epochs (losses of the parameters entering that epoch) plus one after the
/// last update. On a non-finite loss the last good state is written to the
/// checkpoint path (if any) and NumericalError is thrown.
TrainResult train(const TrainConfig& config, const TrainOptions& options = {});

struct MultiStartResult {
  std::vector<TrainResult> runs;
  std::vector<PhysicalParams> finals;
  double spread = 0.0;  // max - min of the first physical parameter
};

/// Independent runs that differ only in the initial physical guess.
MultiStartResult multi_start(const TrainConfig& config, std::span<const std::vector<double>> guesses,
                             const TrainOptions& options = {});

struct NoiseSweepEntry {
  double eps = 0.0;
  double sigma = 0.0;
  TrainResult result;
  std::vector<std::pair<std::int64_t, double>> error_curve;  // (epoch, |v - v_true| / v_true)
  double final_error = 0.0;
};

/// One synthetic run per (eps, sigma) pair; throws ConfigError for an empty list.
std::vector<NoiseSweepEntry> noise_sweep(const TrainConfig& base, std::span<const std::pair<double, double>> pairs,
                                         const TrainOptions& options = {});

struct ForwardOptions {
  int nx = 201;
  double cfl = 0.4;
  double threshold = 0.1;
  int m = 3;
};

struct RadiusPrediction {
  double t = 0.0;
  double radius = 0.0;
};

/// Solves forward from the patch (plateau a in v_and_a mode, else 1) with the
/// given growth parameters and reads the threshold radius at each time.
std::vector<RadiusPrediction> predict_forward(const PhysicalParams& phys, std::span<const double> times,
                                              const ForwardOptions& options = {});

void write_trajectory_csv(const std::filesystem::path& path, const std::vector<TrainRecord>& records,
                          const std::vector<std::string>& phys_names, const std::string& header);

/// Recovered parameters, final losses and run metadata.
void write_final_json(const std::filesystem::path& path, const TrainConfig& config, const TrainResult& result);

}  // namespace tumorpinn
