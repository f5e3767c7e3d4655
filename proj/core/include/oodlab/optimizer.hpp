#pragma once

#include <vector>

#include "oodlab/tensor.hpp"

namespace oodlab {

// Plain (non-Nesterov) SGD with momentum and coupled L2 weight decay.
struct SgdConfig {
  double learning_rate = 0.1;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  std::vector<int> decay_epochs = {15, 20, 25};  // strictly increasing
  double decay_factor = 10.0;
};

// Throws std::invalid_argument on out-of-range fields.
void validate(const SgdConfig& config);

// Initial learning rate divided by decay_factor once per decay epoch
// already reached (decay epoch e counts from epoch e onwards).
double lr_at_epoch(const SgdConfig& config, int epoch);

// v <- momentum * v + grad + weight_decay * param
// param <- param - learning_rate * v
// Throws std::runtime_error on a non-finite gradient entry.
void sgd_step(Tensor& param, const Tensor& grad, Tensor& velocity, const SgdConfig& config);

}  // namespace oodlab
