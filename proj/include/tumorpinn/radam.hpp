#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tumorpinn {

struct RAdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double base_lr = 1e-3;
  double decay_factor = 0.9;      // StepLR gamma
  std::int64_t decay_every = 1000;  // StepLR step size, in epochs
  double clip_norm = 0.0;         // global gradient-norm clip; 0 disables

  void validate() const;
};

/// Rectified Adam over one flat trainable vector (network scalars followed by
/// physical parameters). The step counter doubles as the epoch counter for
/// the step-decay schedule.
struct OptimState {
  RAdamHyper hyper;
  std::int64_t step = 0;
  std::vector<double> m;  // first moment
  std::vector<double> v;  // second moment

  OptimState() = default;
  OptimState(const RAdamHyper& h, std::size_t n) : hyper(h), m(n, 0.0), v(n, 0.0) {}
};

/// base_lr * decay_factor^floor(step / decay_every)
double current_lr(const OptimState& state);

/// One RAdam update in place. While the variance estimate is not yet
/// tractable (rho_t <= 5) the update falls back to bias-corrected momentum.
/// Throws NumericalError for a non-finite gradient and leaves state untouched.
void step(OptimState& state, std::span<double> params, std::span<const double> grads);

}  // namespace tumorpinn
