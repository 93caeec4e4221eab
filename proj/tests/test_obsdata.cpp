#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "tumorpinn/errors.hpp"
#include "tumorpinn/obsdata.hpp"

using namespace tumorpinn;

namespace {

Grid2D grid(int n) {
  Grid2D g;
  g.nx = g.ny = n;
  return g;
}

DensityField radial_field(const Grid2D& g, double (*profile)(double)) {
  DensityField f{g, 0.0, std::vector<double>(g.size(), 0.0)};
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) f.values[g.index(i, j)] = profile(std::hypot(g.x(i), g.y(j)));
  }
  return f;
}

}  // namespace

TEST(RadiusTable, BuiltinValues) {
  const auto s = builtin_radius_table();
  EXPECT_NO_THROW(s.validate());
  ASSERT_EQ(s.entries.size(), 7u);
  EXPECT_EQ(*s.radius_at(0.25), 0.66);
  EXPECT_EQ(*s.radius_at(0.375), 0.97);
  EXPECT_EQ(*s.radius_at(0.5), 1.26);
  EXPECT_EQ(*s.radius_at(0.625), 1.48);
  EXPECT_EQ(*s.radius_at(0.75), 1.93);
  EXPECT_EQ(*s.radius_at(0.875), 2.13);
  EXPECT_EQ(*s.radius_at(1.0), 2.5);
  EXPECT_EQ(*s.radius_at(0.0), 0.5);
  EXPECT_FALSE(s.radius_at(0.125).has_value());
}

TEST(RadiusTable, Validation) {
  RadiusSeries s{{{0.5, 1.0}, {0.25, 0.5}}};
  EXPECT_THROW(s.validate(), DataError);
  s.entries = {{0.5, -1.0}};
  EXPECT_THROW(s.validate(), DataError);
  s.entries = {{1.5, 1.0}};
  EXPECT_THROW(s.validate(), DataError);
  s.entries.clear();
  EXPECT_THROW(s.validate(), DataError);
}

TEST(RadiusTable, CsvOverride) {
  const auto path = std::filesystem::temp_directory_path() / "tumorpinn_radius.csv";
  {
    std::ofstream os(path);
    os << "# comment\nt,radius\n0.125,0.6\n0.5,1.3\n";
  }
  const auto s = read_radius_csv(path);
  EXPECT_EQ(*s.radius_at(0.125), 0.6);
  EXPECT_EQ(*s.radius_at(0.5), 1.3);
  std::filesystem::remove(path);
  EXPECT_THROW(read_radius_csv(path), IoError);
}

TEST(BinaryLabels, Rule) {
  const double r = *builtin_radius_table().radius_at(0.25);
  EXPECT_EQ(presence_label(0.0, 0.0, r), 1);
  EXPECT_EQ(presence_label(2.9, 0.0, r), 0);
  EXPECT_EQ(presence_label(0.66, 0.0, r), 0);
}

TEST(BinaryLabels, ScaleConsistent) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng), k = 0.37;
    EXPECT_EQ(presence_label(x, y, 1.26), presence_label(k * x, k * y, k * 1.26));
  }
}

TEST(BinaryLabels, PositiveFractionMatchesAreaRatio) {
  const std::vector<double> times{0.5};
  const std::size_t n = 200000;
  const auto obs = make_binary_dataset(builtin_radius_table(), times, n, 8);
  double ones = 0;
  for (const auto& o : obs) ones += o.label;
  const double p = std::numbers::pi * 1.26 * 1.26 / 36.0;
  EXPECT_NEAR(p, 0.1386, 1e-4);
  EXPECT_NEAR(ones / n, p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(BinaryLabels, DatasetShapeAndTimes) {
  const std::vector<double> times{0.0, 0.25, 0.375, 0.5};
  const auto obs = make_binary_dataset(builtin_radius_table(), times, 200, 1);
  ASSERT_EQ(obs.size(), 200u);
  for (const auto& o : obs) {
    EXPECT_TRUE(o.t == 0.0 || o.t == 0.25 || o.t == 0.375 || o.t == 0.5);
    EXPECT_EQ(o.label, presence_label(o.x, o.y, *builtin_radius_table().radius_at(o.t)));
  }
  const auto pts = to_data_points(obs);
  EXPECT_EQ(pts[3].target, static_cast<double>(obs[3].label));
  const std::vector<double> missing{0.125};
  EXPECT_THROW(make_binary_dataset(builtin_radius_table(), missing, 10, 1), DataError);
}

TEST(BinaryLabels, BalancedSampling) {
  const std::vector<double> times{0.25};
  const auto obs = make_binary_dataset(builtin_radius_table(), times, 400, 2, SpatialSampling::kBalanced);
  int ones = 0;
  for (const auto& o : obs) ones += o.label;
  EXPECT_EQ(ones, 200);
}

TEST(ExtractRadius, StepProfile) {
  const Grid2D g = grid(201);
  const auto f = radial_field(g, [](double r) { return r < 0.5 ? 1.0 : 0.0; });
  const auto res = extract_radius(f, 0.1);
  EXPECT_NEAR(res.radius, 0.5, g.hx());
  EXPECT_FALSE(res.multiple_crossings);
}

TEST(ExtractRadius, LinearProfileIsExact) {
  const auto f = radial_field(grid(121), [](double r) { return std::max(0.0, 1.0 - r / 2.0); });
  EXPECT_NEAR(extract_radius(f, 0.1).radius, 1.8, 1e-12);
  EXPECT_NEAR(extract_radius(f, 0.5).radius, 1.0, 1e-12);
  const auto c = extract_radius_contour(f, 0.5);
  EXPECT_NEAR(c.mean, 1.0, 0.01);
  EXPECT_LE(c.min, c.max);
}

TEST(ExtractRadius, Errors) {
  const auto f = radial_field(grid(61), [](double r) { return r < 0.5 ? 1.0 : 0.0; });
  EXPECT_THROW(extract_radius(f, 1.5), DomainError);
  EXPECT_THROW(extract_radius(f, 0.0), DomainError);
  auto skew = f;
  skew.values[skew.grid.index(32, 30)] = 0.7;
  EXPECT_THROW(extract_radius(skew, 0.1), DataError);
}

TEST(ExtractRadius, MultipleCrossingsFlagged) {
  const auto f = radial_field(grid(121), [](double r) { return r < 0.5 ? 1.0 : (r > 1.5 && r < 2.0 ? 0.5 : 0.0); });
  const auto res = extract_radius(f, 0.1);
  EXPECT_TRUE(res.multiple_crossings);
  EXPECT_NEAR(res.radius, 0.5, f.grid.hx());
}

TEST(ExtractRadius, PatchAtTimeZero) {
  const auto f = patch_initial(grid(201), 1.0);
  EXPECT_NEAR(extract_radius(f, 0.1).radius, 0.5, f.grid.hx());
}

TEST(RelativeError, TableValues) {
  EXPECT_NEAR(100 * relative_error(2.2308, 2.13), 4.732, 1e-3);
  EXPECT_NEAR(100 * relative_error(2.4426, 2.5), 2.296, 1e-3);
  EXPECT_EQ(relative_error(1.7, 1.7), 0.0);
  EXPECT_THROW(relative_error(1.0, 0.0), DomainError);
}
