#include "oodlab/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace oodlab {

void validate(const SgdConfig& config) {
  if (!(config.learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (config.momentum < 0.0 || config.momentum >= 1.0) {
    throw std::invalid_argument("momentum must lie in [0, 1)");
  }
  if (config.weight_decay < 0.0) {
    throw std::invalid_argument("weight_decay must be non-negative");
  }
  if (!(config.decay_factor > 0.0)) {
    throw std::invalid_argument("decay_factor must be positive");
  }
  for (std::size_t i = 1; i < config.decay_epochs.size(); ++i) {
    if (config.decay_epochs[i] <= config.decay_epochs[i - 1]) {
      throw std::invalid_argument("decay_epochs must be strictly increasing");
    }
  }
}

double lr_at_epoch(const SgdConfig& config, int epoch) {
  if (epoch < 0) {
    throw std::invalid_argument("epoch must be non-negative");
  }
  double lr = config.learning_rate;
  for (int decay_epoch : config.decay_epochs) {
    if (decay_epoch <= epoch) lr /= config.decay_factor;
  }
  return lr;
}

void sgd_step(Tensor& param, const Tensor& grad, Tensor& velocity, const SgdConfig& config) {
  if (!param.same_shape(grad) || !param.same_shape(velocity)) {
    throw std::invalid_argument("sgd_step: param/grad/velocity shapes disagree");
  }
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad(i);
    if (!std::isfinite(g)) {
      throw std::runtime_error("sgd_step: non-finite gradient at flat index " + std::to_string(i));
    }
    const double v = config.momentum * velocity(i) + g + config.weight_decay * param(i);
    velocity(i) = v;
    param(i) -= config.learning_rate * v;
  }
}

}  // namespace oodlab
