#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "tumorpinn/autodiff.hpp"
#include "tumorpinn/network.hpp"
#include "tumorpinn/obsdata.hpp"
#include "tumorpinn/physics.hpp"
#include "tumorpinn/radam.hpp"

namespace tumorpinn {

enum class ExperimentMode {
  kSyntheticMse,  // solver-generated densities, constant v, MSE data loss
  kRealBce,       // binary labels from the radius table, constant v
  kSpatialV1V2,   // binary labels, g = v1 + v2 sin(r)
  kVAndA,         // binary labels, constant v and unknown initial plateau a
};

std::string to_string(ExperimentMode mode);
ExperimentMode experiment_mode_from_string(const std::string& name);

struct TrainConfig {
  std::string name = "custom";
  ExperimentMode mode = ExperimentMode::kSyntheticMse;
  LossWeights weights{10.0, 1.0, 1.0, 100.0};
  std::int64_t epochs = 60000;

  std::uint64_t init_seed = 1;
  std::uint64_t sampling_seed = 2;
  std::uint64_t data_seed = 3;
  std::uint64_t noise_seed = 4;

  /// Empty: v = 2, (v1, v2) = (1, 1), (v, a) = (2, 1).
  std::vector<double> initial_guess;

  RAdamHyper optim;
  Architecture arch;
  SamplingConfig sampling;
  Precision precision = Precision::kFloat32;

  std::int64_t log_every = 100;
  bool resample_each_epoch = false;
  bool early_stop = false;
  double early_stop_tol = 1e-6;
  std::int64_t early_stop_window = 2000;

  /// Observation CSV; when set it replaces generated data.
  std::string data_file;

  // synthetic data generation
  double v_true = 2.0;
  double noise_eps = 0.0;
  double noise_sigma = 0.0;
  int solver_nx = 201;
  double solver_cfl = 0.4;
  std::vector<double> snapshot_times{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

  // binary observations
  std::string radius_file;
  std::vector<double> train_times{0.0, 0.25, 0.375, 0.5};
  SpatialSampling binary_sampling = SpatialSampling::kUniform;

  ParamMode param_mode() const;
  DataLoss data_loss() const;
  PhysicalParams initial_physical() const;
  void validate() const;
  /// One `key = value` line per setting, in a fixed order. Parsing it back
  /// reproduces the config.
  std::string canonical() const;
};

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
TrainConfig preset(const std::string& name);

/// `key = value` lines; '#' starts a comment. A `preset` line resets every
/// setting to that preset. Unknown keys and malformed values throw
/// ConfigError naming the source and line.
TrainConfig parse_config(std::istream& in, const std::string& source_name = "<config>");
TrainConfig load_config(const std::filesystem::path& path);

/// Applies one `key = value` setting.
void apply_setting(TrainConfig& config, const std::string& key, const std::string& value);

}  // namespace tumorpinn
