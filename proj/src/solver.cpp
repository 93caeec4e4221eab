#include "tumorpinn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

#include "json.hpp"
#include "tumorpinn/errors.hpp"

namespace tumorpinn {

void Grid2D::validate() const {
  if (nx < 3 || ny < 3) throw ConfigError("grid needs at least 3 nodes per direction");
  if (!(x_min < x_max && y_min < y_max)) throw ConfigError("grid box is empty");
}

double DensityField::max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }

double DensityField::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.hx() * grid.hy();
}

double DensityField::interpolate(double x, double y) const {
  constexpr double kSnap = 1e-9;
  const double fx = (x - grid.x_min) / grid.hx();
  const double fy = (y - grid.y_min) / grid.hy();
  if (fx < -kSnap || fx > grid.nx - 1 + kSnap || fy < -kSnap || fy > grid.ny - 1 + kSnap) {
    throw DomainError("interpolation point lies outside the grid");
  }
  auto split = [&](double f, int n, int& i, double& w) {
    const double r = std::round(f);
    if (std::abs(f - r) < kSnap) f = r;
    i = std::clamp(static_cast<int>(std::floor(f)), 0, n - 2);
    w = f - i;
  };
  int i = 0, j = 0;
  double wx = 0.0, wy = 0.0;
  split(fx, grid.nx, i, wx);
  split(fy, grid.ny, j, wy);
  const double v00 = at(i, j), v10 = at(i + 1, j), v01 = at(i, j + 1), v11 = at(i + 1, j + 1);
  if (wx == 0.0 && wy == 0.0) return v00;
  return (1.0 - wx) * ((1.0 - wy) * v00 + wy * v01) + wx * ((1.0 - wy) * v10 + wy * v11);
}

double SourceSpec::rate(double x, double y) const {
  if (mode == ParamMode::kSpatialV1V2) return coeffs.at(0) + coeffs.at(1) * std::sin(std::sqrt(x * x + y * y));
  return coeffs.at(0);
}

void SolveConfig::validate() const {
  if (m < 2) throw ConfigError("porous-medium exponent m must be >= 2");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("CFL safety factor must be in (0, 1]");
  if (!(plateau >= 0.0)) throw ConfigError("initial plateau must be nonnegative");
  if (source.coeffs.size() < (source.mode == ParamMode::kSpatialV1V2 ? 2u : 1u)) {
    throw ConfigError("source coefficients do not match the source mode");
  }
  for (double t : output_times) {
    if (!(t >= 0.0 && t <= t_end)) throw ConfigError("output time " + std::to_string(t) + " is outside [0, t_end]");
  }
}

DensityField patch_initial(const Grid2D& grid, double plateau) {
  grid.validate();
  DensityField f{grid, 0.0, std::vector<double>(grid.size(), 0.0)};
  for (int i = 1; i < grid.nx - 1; ++i) {
    for (int j = 1; j < grid.ny - 1; ++j) {
      f.values[grid.index(i, j)] = initial_density<double>(grid.x(i), grid.y(j), plateau);
    }
  }
  return f;
}

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

}  // namespace

SolveResult solve(const SolveConfig& config, const DensityField& rho0) {
  config.validate();
  const Grid2D& g = rho0.grid;
  g.validate();
  if (rho0.values.size() != g.size()) throw ConfigError("initial field does not match its grid");
  for (double v : rho0.values) {
    if (!(v >= 0.0)) throw DataError("initial density must be finite and nonnegative");
  }
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      if ((i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1) && rho0.at(i, j) != 0.0) {
        throw DataError("initial density must vanish on the boundary");
      }
    }
  }

  std::vector<double> outputs = config.output_times;
  std::sort(outputs.begin(), outputs.end());
  for (double t : outputs) {
    if (t < rho0.t) throw ConfigError("output time precedes the initial time");
  }

  const int nx = g.nx, ny = g.ny;
  const double hx = g.hx(), hy = g.hy();
  const double h2 = std::min(hx, hy) * std::min(hx, hy);
  const double cx = 0.5 / (hx * hx);
  const double cy = 0.5 / (hy * hy);
  const int m = config.m;

  std::vector<double> rate(g.size(), 0.0);
  double max_rate = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      rate[g.index(i, j)] = config.source.rate(g.x(i), g.y(j));
      max_rate = std::max(max_rate, std::abs(rate[g.index(i, j)]));
    }
  }

  SolveResult result;
  std::vector<double> rho = rho0.values;
  std::vector<double> next(g.size(), 0.0);
  std::vector<double> mob(g.size(), 0.0);
  double t = rho0.t;
  std::size_t out_k = 0;
  constexpr double kTimeTol = 1e-13;

  while (out_k < outputs.size()) {
    if (std::abs(outputs[out_k] - t) <= kTimeTol * std::max(1.0, std::abs(t))) {
      result.snapshots.push_back(DensityField{g, outputs[out_k], rho});
      ++out_k;
      continue;
    }
    double max_mob = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
      mob[k] = m * ipow(rho[k], m - 1);
      max_mob = std::max(max_mob, mob[k]);
    }
    double dt = outputs[out_k] - t;
    if (max_mob > 0.0) dt = std::min(dt, config.cfl * h2 / (2.0 * 2.0 * max_mob));
    if (max_rate > 0.0) dt = std::min(dt, config.cfl / max_rate);
    if (dt < config.min_dt) {
      throw NumericalError("time step underflow (dt = " + std::to_string(dt) + " at t = " + std::to_string(t) + ")");
    }
    const bool last = dt >= outputs[out_k] - t;

    double clipped = 0.0, mass = 0.0;
    for (int i = 1; i < nx - 1; ++i) {
      for (int j = 1; j < ny - 1; ++j) {
        const std::size_t k = g.index(i, j);
        const std::size_t kw = k - static_cast<std::size_t>(ny), ke = k + static_cast<std::size_t>(ny);
        const std::size_t ks = k - 1, kn = k + 1;
        const double r = rho[k];
        const double div_x = ((mob[k] + mob[ke]) * (rho[ke] - r) - (mob[kw] + mob[k]) * (r - rho[kw])) * cx;
        const double div_y = ((mob[k] + mob[kn]) * (rho[kn] - r) - (mob[ks] + mob[k]) * (r - rho[ks])) * cy;
        double v = r + dt * (div_x + div_y + rate[k] * r);
        if (!std::isfinite(v)) throw NumericalError("non-finite density at t = " + std::to_string(t));
        if (v < 0.0) {
          clipped -= v;
          v = 0.0;
        }
        mass += v;
        next[k] = v;
      }
    }
    std::swap(rho, next);
    t = last ? outputs[out_k] : t + dt;
    ++result.steps;
    const double cell = hx * hy;
    result.clipped_mass += clipped * cell;
    if (mass > 0.0) result.max_clipped_fraction = std::max(result.max_clipped_fraction, clipped / mass);
  }
  return result;
}

std::vector<DataPoint> sample_snapshots(std::span<const DensityField> snapshots, std::size_t n_points,
                                        std::uint64_t seed) {
  if (snapshots.empty()) throw ConfigError("no snapshots to sample from");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, snapshots.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<DataPoint> out;
  out.reserve(n_points);
  for (std::size_t n = 0; n < n_points; ++n) {
    const DensityField& f = snapshots[pick(rng)];
    const double x = f.grid.x_min + (f.grid.x_max - f.grid.x_min) * unit(rng);
    const double y = f.grid.y_min + (f.grid.y_max - f.grid.y_min) * unit(rng);
    out.push_back(DataPoint{{f.t, x, y}, f.interpolate(x, y)});
  }
  return out;
}

std::vector<DataPoint> synthetic_dataset(const SolveConfig& config, const Grid2D& grid,
                                         const SyntheticSampleSpec& spec, std::uint64_t seed) {
  for (double t : spec.snapshot_times) {
    if (!(t >= 0.0 && t <= config.t_end)) {
      throw DomainError("sample time " + std::to_string(t) + " lies outside the solved interval [0, t_end]");
    }
  }
  SolveConfig cfg = config;
  cfg.output_times = spec.snapshot_times;
  const SolveResult res = solve(cfg, patch_initial(grid, config.plateau));
  return sample_snapshots(res.snapshots, spec.n_points, seed);
}

std::vector<DataPoint> add_noise(std::span<const DataPoint> points, double eps, double sigma, std::uint64_t seed) {
  if (!(eps >= 0.0) || !(sigma >= 0.0)) throw ConfigError("noise scale and sigma must be nonnegative");
  std::vector<DataPoint> out(points.begin(), points.end());
  if (eps == 0.0 || sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> eta(0.0, sigma);
  for (auto& p : out) p.target += eps * eta(rng);
  return out;
}

void write_field_csv(const DensityField& field, const std::filesystem::path& path, const std::string& header) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << header << "x,y,value\n" << std::setprecision(17);
  for (int i = 0; i < field.grid.nx; ++i) {
    for (int j = 0; j < field.grid.ny; ++j) os << field.grid.x(i) << ',' << field.grid.y(j) << ',' << field.at(i, j) << '\n';
  }
}

void write_field_binary(const DensityField& field, const SolveConfig& config, const std::filesystem::path& path) {
  {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(field.values.data()),
             static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  }
  nlohmann::json side = {
      {"format", "tumorpinn-field-v1"},
      {"layout", "float64, index = i * ny + j, i along x"},
      {"nx", field.grid.nx},
      {"ny", field.grid.ny},
      {"x_min", field.grid.x_min},
      {"x_max", field.grid.x_max},
      {"y_min", field.grid.y_min},
      {"y_max", field.grid.y_max},
      {"t", field.t},
      {"m", config.m},
      {"source_mode", to_string(config.source.mode)},
      {"source_coeffs", config.source.coeffs},
      {"plateau", config.plateau},
  };
  std::ofstream js(path.string() + ".json");
  if (!js) throw IoError("cannot write sidecar for " + path.string());
  js << side.dump(2) << '\n';
}

DensityField read_field_binary(const std::filesystem::path& path) {
  std::ifstream js(path.string() + ".json");
  if (!js) throw IoError("missing sidecar " + path.string() + ".json");
  const nlohmann::json side = nlohmann::json::parse(js);
  DensityField f;
  f.grid.nx = side.at("nx");
  f.grid.ny = side.at("ny");
  f.grid.x_min = side.at("x_min");
  f.grid.x_max = side.at("x_max");
  f.grid.y_min = side.at("y_min");
  f.grid.y_max = side.at("y_max");
  f.t = side.at("t");
  f.values.resize(f.grid.size());
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!is) throw IoError(path.string() + " is shorter than its sidecar declares");
  return f;
}

}  // namespace tumorpinn
