#pragma once

// Radius observations, binary presence labels built from them under radial
// symmetry, and radius extraction from simulated density fields.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "tumorpinn/physics.hpp"
#include "tumorpinn/solver.hpp"

namespace tumorpinn {

struct RadiusEntry {
  double t = 0.0;
  double radius = 0.0;
};

/// Observed tumour radius against rescaled time.
struct RadiusSeries {
  std::vector<RadiusEntry> entries;

  /// Times strictly increasing in [0, 1], radii positive.
  void validate() const;
  /// Radius at exactly tabulated time t; t = 0 falls back to the initial patch
  /// radius 0.5 when not tabulated. Never interpolates.
  std::optional<double> radius_at(double t) const;
};

/// Radius of the initial disc patch.
inline constexpr double kInitialRadius = 0.5;

/// The seven observed (time, radius) pairs of the lab series.
RadiusSeries builtin_radius_table();

RadiusSeries read_radius_csv(const std::filesystem::path& path);

struct BinaryObservation {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  int label = 0;
};

/// Label rule: 1 iff sqrt(x^2 + y^2) < radius.
inline int presence_label(double x, double y, double radius) { return std::sqrt(x * x + y * y) < radius ? 1 : 0; }

enum class SpatialSampling {
  kUniform,   // (x, y) uniform over the box
  kBalanced,  // alternating draws inside / outside the observed disc
};

/// n_points labelled samples, times drawn uniformly from train_times. Throws
/// DataError if a requested time has no tabulated radius (t = 0 is allowed).
std::vector<BinaryObservation> make_binary_dataset(const RadiusSeries& series, std::span<const double> train_times,
                                                   std::size_t n_points, std::uint64_t seed,
                                                   SpatialSampling sampling = SpatialSampling::kUniform,
                                                   const DomainBox& box = {});

std::vector<DataPoint> to_data_points(std::span<const BinaryObservation> obs);

struct RadiusResult {
  double radius = 0.0;
  bool multiple_crossings = false;  // profile crossed the threshold more than once
};

/// Marches from the origin along +x and returns the linearly interpolated
/// first crossing of `threshold`. Throws DomainError when the threshold is
/// not in (0, max) or the profile never crosses it, and DataError when the
/// field is not radially symmetric to `symmetry_tol`.
RadiusResult extract_radius(const DensityField& field, double threshold, double symmetry_tol = 1e-6);

struct ContourRadius {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// First threshold crossing along `n_rays` equally spaced rays from the origin,
/// sampled by bilinear interpolation. Used to diagnose asymmetric fields.
ContourRadius extract_radius_contour(const DensityField& field, double threshold, int n_rays = 64);

/// |pred - obs| / |obs|; throws DomainError for obs = 0.
double relative_error(double pred, double obs);

}  // namespace tumorpinn
