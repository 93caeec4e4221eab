#pragma once

// Explicit conservative finite-difference solver for
//
//   rho_t = div(m rho^(m-1) grad rho) + g(x, y) rho      on a rectangle,
//   rho = 0 on the boundary.
//
// Face fluxes use the arithmetic mean of the nodal mobility m rho^(m-1), so
// the flux vanishes between two empty nodes and fronts move at finite speed.
// The time step is recomputed every step from the current maximum mobility.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tumorpinn/physics.hpp"

namespace tumorpinn {

struct Grid2D {
  int nx = 201;
  int ny = 201;
  double x_min = -3.0, x_max = 3.0;
  double y_min = -3.0, y_max = 3.0;

  double hx() const { return (x_max - x_min) / (nx - 1); }
  double hy() const { return (y_max - y_min) / (ny - 1); }
  // measured from the centre so mirrored nodes are exact negatives
  double x(int i) const { return 0.5 * (x_min + x_max) + (i - 0.5 * (nx - 1)) * hx(); }
  double y(int j) const { return 0.5 * (y_min + y_max) + (j - 0.5 * (ny - 1)) * hy(); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + j; }
  void validate() const;
};

/// Nodal density at one time. values[index(i, j)] sits at (x(i), y(j)).
struct DensityField {
  Grid2D grid;
  double t = 0.0;
  std::vector<double> values;

  double at(int i, int j) const { return values[grid.index(i, j)]; }
  double max() const;
  /// Trapezoid-free nodal sum times cell area.
  double mass() const;
  /// Bilinear interpolation; exact at nodes. Throws DomainError outside the grid.
  double interpolate(double x, double y) const;
};

struct SourceSpec {
  ParamMode mode = ParamMode::kConstantV;
  std::vector<double> coeffs{0.0};  // [v] or [v1, v2]; for kVAndA [v, a] and only v is used here

  double rate(double x, double y) const;
};

struct SolveConfig {
  int m = 3;
  SourceSpec source;
  double plateau = 1.0;
  double t_end = 1.0;
  double cfl = 0.4;
  std::vector<double> output_times{1.0};
  double min_dt = 1e-12;

  void validate() const;
};

struct SolveResult {
  std::vector<DensityField> snapshots;  // one per output time, in ascending order
  std::int64_t steps = 0;
  double clipped_mass = 0.0;            // total mass removed by clipping undershoots
  double max_clipped_fraction = 0.0;    // worst per-step clipped mass / current mass
};

/// rho0 = plateau on the open disc x^2 + y^2 < 0.25, zero elsewhere.
DensityField patch_initial(const Grid2D& grid, double plateau);

SolveResult solve(const SolveConfig& config, const DensityField& rho0);

struct SyntheticSampleSpec {
  std::size_t n_points = 200;
  std::vector<double> snapshot_times{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
};

/// Picks a snapshot uniformly, then (x, y) uniformly over the grid box, and
/// reads the density by bilinear interpolation.
std::vector<DataPoint> sample_snapshots(std::span<const DensityField> snapshots, std::size_t n_points,
                                        std::uint64_t seed);

/// Runs the solver from the patch initial condition and samples observations.
std::vector<DataPoint> synthetic_dataset(const SolveConfig& config, const Grid2D& grid,
                                         const SyntheticSampleSpec& spec, std::uint64_t seed);

/// target + eps * eta with eta ~ N(0, sigma^2), independent per point. No re-clipping.
std::vector<DataPoint> add_noise(std::span<const DataPoint> points, double eps, double sigma, std::uint64_t seed);

/// Snapshot dump as "x,y,value" CSV.
void write_field_csv(const DensityField& field, const std::filesystem::path& path, const std::string& header);
/// Native-endian doubles in Grid2D::index order, plus a `<path>.json` sidecar
/// holding the grid, time and model parameters.
void write_field_binary(const DensityField& field, const SolveConfig& config, const std::filesystem::path& path);
DensityField read_field_binary(const std::filesystem::path& path);

}  // namespace tumorpinn
