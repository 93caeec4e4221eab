#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tumorpinn/autodiff.hpp"
#include "tumorpinn/errors.hpp"
#include "tumorpinn/network.hpp"

using namespace tumorpinn;

TEST(Architecture, ParameterCount) {
  // 3*64+64 + 2*(64*64+64) + 64+1
  EXPECT_EQ(Architecture{}.parameter_count(), 8641u);
  Architecture a;
  a.widths = {3, 1};
  EXPECT_EQ(a.parameter_count(), 4u);
}

TEST(Architecture, RejectsBadShapes) {
  Architecture a;
  a.widths = {3, 0, 1};
  EXPECT_THROW(a.validate(), ConfigError);
  a.widths = {2, 8, 1};
  EXPECT_THROW(a.validate(), ConfigError);
  a.widths = {3, 8, 2};
  EXPECT_THROW(a.validate(), ConfigError);
  a.widths = {3};
  EXPECT_THROW(a.validate(), ConfigError);
  a.widths = {3, 0, 1};
  EXPECT_THROW(init_xavier(a, 1), ConfigError);
}

TEST(Xavier, DeterministicPerSeed) {
  EXPECT_EQ(init_xavier(Architecture{}, 42).flatten(), init_xavier(Architecture{}, 42).flatten());
  EXPECT_NE(init_xavier(Architecture{}, 42).flatten(), init_xavier(Architecture{}, 43).flatten());
}

TEST(Xavier, BoundsAndZeroBias) {
  const auto net = init_xavier(Architecture{}, 42);
  const double bound0 = std::sqrt(6.0 / 67.0);
  EXPECT_NEAR(bound0, 0.2993, 1e-4);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& L = net.layers[l];
    const double bound = std::sqrt(6.0 / static_cast<double>(L.weight.rows() + L.weight.cols()));
    EXPECT_LE(L.weight.cwiseAbs().maxCoeff(), bound);
    // the sample should actually spread over most of the interval
    EXPECT_GT(L.weight.cwiseAbs().maxCoeff(), 0.8 * bound);
    EXPECT_TRUE((L.bias.array() == 0.0).all());
  }
  EXPECT_LE(net.layers[0].weight.cwiseAbs().maxCoeff(), bound0);
}

TEST(NetworkParams, FlattenRoundTrip) {
  const auto net = init_xavier(Architecture{}, 7);
  const auto flat = net.flatten();
  ASSERT_EQ(flat.size(), net.parameter_count());
  // row-major weights, then the bias
  EXPECT_EQ(flat[1], net.layers[0].weight(0, 1));
  EXPECT_EQ(flat[3], net.layers[0].weight(1, 0));
  EXPECT_EQ(flat[192], net.layers[0].bias(0));
  EXPECT_EQ(NetworkParams::unflatten(net.arch, flat).flatten(), flat);
  auto other = NetworkParams::zeros(net.arch);
  other.assign(flat);
  EXPECT_EQ(other.flatten(), flat);
  std::vector<double> wrong(5);
  EXPECT_THROW(other.assign(wrong), ConfigError);
}

TEST(NetworkParams, ValidateCatchesNonFinite) {
  auto net = init_xavier(Architecture{}, 1);
  net.layers[1].weight(2, 3) = std::nan("");
  EXPECT_THROW(net.validate(), ConfigError);
}

TEST(Forward, ZeroNetworkIsZero) {
  const auto net = NetworkParams::zeros(Architecture{});
  EXPECT_EQ(forward(net, {0.3, 0.1, -2.0}), 0.0);
  const Jet2 j = eval_with_input_derivs(net, {0.3, 0.1, -2.0});
  EXPECT_EQ(j.value, 0.0);
  for (double g : j.grad) EXPECT_EQ(g, 0.0);
  for (double h : j.hess_diag) EXPECT_EQ(h, 0.0);
}

TEST(Forward, LinearLayerJet) {
  // u = 3t + 2x
  Architecture a;
  a.widths = {3, 1};
  auto net = NetworkParams::zeros(a);
  net.layers[0].weight << 3.0, 2.0, 0.0;
  const Jet2 j = eval_with_input_derivs(net, {1.0, 1.0, 1.0});
  EXPECT_EQ(j.value, 5.0);
  EXPECT_EQ(j.grad[kAxisT], 3.0);
  EXPECT_EQ(j.grad[kAxisX], 2.0);
  EXPECT_EQ(j.grad[kAxisY], 0.0);
  EXPECT_EQ(j.hess_diag[0], 0.0);
  EXPECT_EQ(j.hess_diag[1], 0.0);
}

TEST(Forward, OutputIsNonNegative) {
  const auto net = init_xavier(Architecture{}, 3);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 200; ++i) EXPECT_GE(forward(net, {std::abs(u(rng)) / 3, u(rng), u(rng)}), 0.0);
}

TEST(Forward, NonFiniteOutputThrows) {
  Architecture a;
  a.widths = {3, 1};
  auto net = NetworkParams::zeros(a);
  net.layers[0].weight << 1e308, 1e308, 0.0;
  EXPECT_THROW(forward(net, {10.0, 10.0, 0.0}), NumericalError);
}

TEST(PhysicalParams, ModesAndNames) {
  EXPECT_EQ(PhysicalParams::size_for(ParamMode::kConstantV), 1u);
  EXPECT_EQ(PhysicalParams::size_for(ParamMode::kSpatialV1V2), 2u);
  EXPECT_EQ(PhysicalParams::size_for(ParamMode::kVAndA), 2u);
  PhysicalParams p;
  p.mode = ParamMode::kSpatialV1V2;
  p.values = {1.0};
  EXPECT_THROW(p.validate(), ConfigError);
  p.values = {1.0, std::numeric_limits<double>::infinity()};
  EXPECT_THROW(p.validate(), ConfigError);
  for (ParamMode m : {ParamMode::kConstantV, ParamMode::kSpatialV1V2, ParamMode::kVAndA}) {
    EXPECT_EQ(param_mode_from_string(to_string(m)), m);
  }
  EXPECT_THROW(param_mode_from_string("bogus"), ConfigError);
}
