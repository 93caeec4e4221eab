#include <gtest/gtest.h>

#include <cmath>

#include "tumorpinn/errors.hpp"
#include "tumorpinn/radam.hpp"

using namespace tumorpinn;

TEST(Schedule, StepDecay) {
  OptimState s(RAdamHyper{}, 1);
  EXPECT_DOUBLE_EQ(current_lr(s), 1e-3);
  s.step = 999;
  EXPECT_DOUBLE_EQ(current_lr(s), 1e-3);
  s.step = 1000;
  EXPECT_NEAR(current_lr(s), 9e-4, 1e-18);
  s.step = 2500;
  EXPECT_NEAR(current_lr(s), 8.1e-4, 1e-18);
}

TEST(RAdam, ZeroGradientLeavesParameters) {
  OptimState s(RAdamHyper{}, 3);
  std::vector<double> p{1.0, -2.0, 0.5};
  const auto before = p;
  std::vector<double> g(3, 0.0);
  for (int k = 0; k < 10; ++k) step(s, p, g);
  EXPECT_EQ(p, before);
  EXPECT_EQ(s.step, 10);
}

TEST(RAdam, QuadraticToy) {
  OptimState s(RAdamHyper{}, 1);
  std::vector<double> p{1.0};
  for (int k = 0; k < 5000; ++k) {
    const std::vector<double> g{2.0 * p[0]};
    step(s, p, g);
  }
  EXPECT_LT(std::abs(p[0]), 1e-3);
}

TEST(RAdam, WarmupStepsAreMomentumOnly) {
  // rho_t <= 5 for the first steps: update = lr * m_hat
  RAdamHyper h;
  h.decay_every = 1000000;
  OptimState s(h, 1);
  std::vector<double> p{0.0};
  const std::vector<double> g{0.5};
  step(s, p, g);
  EXPECT_NEAR(p[0], -1e-3 * 0.5, 1e-15);
  step(s, p, g);
  EXPECT_NEAR(p[0], -2e-3 * 0.5, 1e-15);
}

TEST(RAdam, RectifiedStepMatchesFormula) {
  RAdamHyper h;
  h.decay_every = 1000000;
  OptimState s(h, 1);
  std::vector<double> p{0.0};
  const std::vector<double> g{0.5};
  double prev = 0.0;
  for (int k = 1; k <= 10; ++k) {
    prev = p[0];
    step(s, p, g);
  }
  // constant gradient: m_hat = g, v = (1 - beta2^t) g^2
  const double b2 = h.beta2;
  const double rho_inf = 2.0 / (1.0 - b2) - 1.0;
  const double b2t = std::pow(b2, 10);
  const double rho_t = rho_inf - 2.0 * 10 * b2t / (1.0 - b2t);
  ASSERT_GT(rho_t, 5.0);
  const double r = std::sqrt((rho_t - 4) * (rho_t - 2) * rho_inf / ((rho_inf - 4) * (rho_inf - 2) * rho_t));
  const double sb2 = std::sqrt(1.0 - b2t);
  const double expected = -1e-3 * r * 0.5 * sb2 / (0.5 * sb2 + h.eps);
  EXPECT_NEAR(p[0] - prev, expected, 1e-12);
}

TEST(RAdam, NonFiniteGradientRejected) {
  OptimState s(RAdamHyper{}, 2);
  std::vector<double> p{1.0, 2.0};
  const std::vector<double> g{0.1, std::nan("")};
  EXPECT_THROW(step(s, p, g), NumericalError);
  EXPECT_EQ(s.step, 0);
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(s.m[0], 0.0);
}

TEST(RAdam, SizeMismatchRejected) {
  OptimState s(RAdamHyper{}, 2);
  std::vector<double> p{1.0};
  const std::vector<double> g{0.1};
  EXPECT_THROW(step(s, p, g), ConfigError);
}

TEST(RAdam, HyperValidation) {
  RAdamHyper h;
  h.beta1 = 1.0;
  EXPECT_THROW(h.validate(), ConfigError);
  h = RAdamHyper{};
  h.base_lr = -1;
  EXPECT_THROW(h.validate(), ConfigError);
  h = RAdamHyper{};
  h.decay_every = 0;
  EXPECT_THROW(h.validate(), ConfigError);
}
