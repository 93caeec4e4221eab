#include "tumorpinn/radam.hpp"

#include <cmath>

#include "tumorpinn/errors.hpp"

namespace tumorpinn {

void RAdamHyper::validate() const {
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("RAdam betas must be in [0, 1)");
  if (!(eps > 0.0)) throw ConfigError("RAdam eps must be positive");
  if (!(base_lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(decay_factor > 0.0 && decay_factor <= 1.0)) throw ConfigError("lr decay factor must be in (0, 1]");
  if (decay_every <= 0) throw ConfigError("lr decay interval must be positive");
  if (clip_norm < 0.0) throw ConfigError("clip norm must be nonnegative");
}

double current_lr(const OptimState& state) {
  const auto k = state.step / state.hyper.decay_every;
  return state.hyper.base_lr * std::pow(state.hyper.decay_factor, static_cast<double>(k));
}

void step(OptimState& state, std::span<double> params, std::span<const double> grads) {
  if (params.size() != grads.size() || params.size() != state.m.size() || state.v.size() != state.m.size()) {
    throw ConfigError("RAdam: parameter, gradient and moment vectors differ in length");
  }
  double norm2 = 0.0;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericalError("RAdam: non-finite gradient at index " + std::to_string(i) + " (step " +
                           std::to_string(state.step) + ")");
    }
    norm2 += grads[i] * grads[i];
  }
  const auto& h = state.hyper;
  double scale = 1.0;
  if (h.clip_norm > 0.0) {
    const double norm = std::sqrt(norm2);
    if (norm > h.clip_norm) scale = h.clip_norm / norm;
  }

  const double lr = current_lr(state);
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double b1t = std::pow(h.beta1, t);
  const double b2t = std::pow(h.beta2, t);
  const double bias1 = 1.0 - b1t;
  const double bias2 = 1.0 - b2t;
  const double rho_inf = 2.0 / (1.0 - h.beta2) - 1.0;
  const double rho_t = rho_inf - 2.0 * t * b2t / bias2;

  const bool rectified = rho_t > 5.0;
  double rect = 0.0;
  if (rectified) {
    rect = std::sqrt((rho_t - 4.0) * (rho_t - 2.0) * rho_inf / ((rho_inf - 4.0) * (rho_inf - 2.0) * rho_t));
  }
  const double sqrt_bias2 = std::sqrt(bias2);

  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i] * scale;
    state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g;
    state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g * g;
    const double m_hat = state.m[i] / bias1;
    if (rectified) {
      const double adaptive = sqrt_bias2 / (std::sqrt(state.v[i]) + h.eps);
      params[i] -= lr * m_hat * rect * adaptive;
    } else {
      params[i] -= lr * m_hat;
    }
  }
}

}  // namespace tumorpinn
