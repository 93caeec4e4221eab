#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tumorpinn {

/// (t, x, y)
using Point3 = std::array<double, 3>;

/// Layer widths, input first. The density network is always [3, ..., 1].
struct Architecture {
  std::vector<int> widths{3, 64, 64, 64, 1};

  /// Throws ConfigError unless widths = [3, hidden..., 1] with every width > 0.
  void validate() const;
  std::size_t parameter_count() const;
  std::size_t layer_count() const { return widths.size() - 1; }
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // n_out x n_in
  Eigen::VectorXd bias;    // n_out
};

/// All trainable network scalars. Hidden layers use tanh; the linear output is
/// passed through |.| so the predicted density is never negative.
///
/// Flat layout: layer by layer, weights row-major followed by the bias.
struct NetworkParams {
  Architecture arch;
  std::vector<DenseLayer> layers;

  std::size_t parameter_count() const { return arch.parameter_count(); }
  /// Throws ConfigError on inconsistent layer shapes or non-finite entries.
  void validate() const;

  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
  static NetworkParams unflatten(const Architecture& arch, std::span<const double> flat);
  /// All weights and biases zero.
  static NetworkParams zeros(const Architecture& arch);
};

/// Glorot-uniform weights in +-sqrt(6 / (n_in + n_out)), zero biases.
NetworkParams init_xavier(const Architecture& arch, std::uint64_t seed);

/// |raw network output| at (t, x, y). Throws NumericalError if non-finite.
double forward(const NetworkParams& net, const Point3& point);

enum class ParamMode { kConstantV, kSpatialV1V2, kVAndA };

std::string to_string(ParamMode mode);
ParamMode param_mode_from_string(const std::string& name);

/// Trainable physical unknowns:
///   kConstantV   -> [v]
///   kSpatialV1V2 -> [v1, v2], growth rate v1 + v2 sin(r)
///   kVAndA       -> [v, a], a = initial plateau height
struct PhysicalParams {
  ParamMode mode = ParamMode::kConstantV;
  std::vector<double> values{2.0};

  static std::size_t size_for(ParamMode mode) { return mode == ParamMode::kConstantV ? 1 : 2; }
  void validate() const;
  std::vector<std::string> names() const;
};

}  // namespace tumorpinn
