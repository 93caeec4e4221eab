#include "tumorpinn/obsdata.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "tumorpinn/csv.hpp"
#include "tumorpinn/errors.hpp"

namespace tumorpinn {

void RadiusSeries::validate() const {
  if (entries.empty()) throw DataError("radius series is empty");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (!(e.t >= 0.0 && e.t <= 1.0)) throw DataError("radius time " + std::to_string(e.t) + " is outside [0, 1]");
    if (!(e.radius > 0.0)) throw DataError("radius must be positive");
    if (k > 0 && !(e.t > entries[k - 1].t)) throw DataError("radius times must be strictly increasing");
  }
}

std::optional<double> RadiusSeries::radius_at(double t) const {
  for (const auto& e : entries) {
    if (e.t == t) return e.radius;
  }
  if (t == 0.0) return kInitialRadius;
  return std::nullopt;
}

RadiusSeries builtin_radius_table() {
  return RadiusSeries{{{0.25, 0.66}, {0.375, 0.97}, {0.5, 1.26}, {0.625, 1.48}, {0.75, 1.93}, {0.875, 2.13}, {1.0, 2.5}}};
}

RadiusSeries read_radius_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t ct = table.column("t");
  const std::size_t cr = table.column("radius");
  RadiusSeries s;
  for (const auto& row : table.rows) s.entries.push_back({row[ct], row[cr]});
  s.validate();
  return s;
}

std::vector<BinaryObservation> make_binary_dataset(const RadiusSeries& series, std::span<const double> train_times,
                                                   std::size_t n_points, std::uint64_t seed, SpatialSampling sampling,
                                                   const DomainBox& box) {
  series.validate();
  if (train_times.empty()) throw ConfigError("no training times given");
  std::vector<double> radii;
  for (double t : train_times) {
    const auto r = series.radius_at(t);
    if (!r) throw DataError("no observed radius at t = " + std::to_string(t));
    radii.push_back(*r);
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, train_times.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<BinaryObservation> out;
  out.reserve(n_points);
  for (std::size_t n = 0; n < n_points; ++n) {
    const std::size_t k = pick(rng);
    const double R = radii[k];
    double x = 0.0, y = 0.0;
    if (sampling == SpatialSampling::kBalanced && n % 2 == 0) {
      // uniform in the disc of radius R (clipped to the box)
      do {
        const double rr = R * std::sqrt(unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        x = rr * std::cos(phi);
        y = rr * std::sin(phi);
      } while (x < box.x_min || x > box.x_max || y < box.y_min || y > box.y_max);
    } else {
      const bool outside_only = sampling == SpatialSampling::kBalanced;
      do {
        x = box.x_min + (box.x_max - box.x_min) * unit(rng);
        y = box.y_min + (box.y_max - box.y_min) * unit(rng);
      } while (outside_only && presence_label(x, y, R) == 1);
    }
    out.push_back({train_times[k], x, y, presence_label(x, y, R)});
  }
  return out;
}

std::vector<DataPoint> to_data_points(std::span<const BinaryObservation> obs) {
  std::vector<DataPoint> out;
  out.reserve(obs.size());
  for (const auto& o : obs) out.push_back(DataPoint{{o.t, o.x, o.y}, static_cast<double>(o.label)});
  return out;
}

namespace {

int nearest_index(double v, double lo, double h, int n) {
  return std::clamp(static_cast<int>(std::lround((v - lo) / h)), 0, n - 1);
}

}  // namespace

RadiusResult extract_radius(const DensityField& field, double threshold, double symmetry_tol) {
  const Grid2D& g = field.grid;
  const double vmax = field.max();
  if (!(threshold > 0.0 && threshold < vmax)) {
    throw DomainError("threshold " + std::to_string(threshold) + " is not inside (0, max density)");
  }
  const int i0 = nearest_index(0.0, g.x_min, g.hx(), g.nx);
  const int j0 = nearest_index(0.0, g.y_min, g.hy(), g.ny);

  // +x ray against +y ray as a cheap radial-symmetry check
  const int reach = std::min(g.nx - 1 - i0, g.ny - 1 - j0);
  for (int k = 0; k <= reach; ++k) {
    if (std::abs(field.at(i0 + k, j0) - field.at(i0, j0 + k)) > symmetry_tol * std::max(1.0, vmax)) {
      throw DataError("density field is not radially symmetric; use the contour radius instead");
    }
  }

  RadiusResult res;
  bool found = false;
  const double origin_x = g.x(i0);
  double prev = field.at(i0, j0) - threshold;
  for (int i = i0 + 1; i < g.nx; ++i) {
    const double cur = field.at(i, j0) - threshold;
    if ((prev >= 0.0) != (cur >= 0.0)) {
      if (!found) {
        const double w = prev / (prev - cur);
        res.radius = g.x(i - 1) - origin_x + w * g.hx();
        found = true;
      } else {
        res.multiple_crossings = true;
        break;
      }
    }
    prev = cur;
  }
  if (!found) throw DomainError("density never crosses the threshold along +x: no boundary");
  return res;
}

ContourRadius extract_radius_contour(const DensityField& field, double threshold, int n_rays) {
  const Grid2D& g = field.grid;
  if (!(threshold > 0.0 && threshold < field.max())) throw DomainError("threshold is not inside (0, max density)");
  if (n_rays <= 0) throw ConfigError("need at least one ray");
  const double r_max = std::min({g.x_max, -g.x_min, g.y_max, -g.y_min});
  const double dr = 0.25 * std::min(g.hx(), g.hy());
  ContourRadius out{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (int k = 0; k < n_rays; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / n_rays;
    const double c = std::cos(phi), s = std::sin(phi);
    double prev = field.interpolate(0.0, 0.0) - threshold;
    double r_cross = r_max;
    for (double r = dr; r <= r_max; r += dr) {
      const double cur = field.interpolate(r * c, r * s) - threshold;
      if ((prev >= 0.0) != (cur >= 0.0)) {
        r_cross = r - dr + dr * prev / (prev - cur);
        break;
      }
      prev = cur;
    }
    out.min = std::min(out.min, r_cross);
    out.max = std::max(out.max, r_cross);
    out.mean += r_cross / n_rays;
  }
  return out;
}

double relative_error(double pred, double obs) {
  if (obs == 0.0) throw DomainError("relative error against an observation of 0");
  return std::abs(pred - obs) / std::abs(obs);
}

}  // namespace tumorpinn
