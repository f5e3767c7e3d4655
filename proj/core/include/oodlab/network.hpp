#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oodlab/tensor.hpp"

namespace oodlab {

enum class Activation { relu, identity };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct DenseLayer {
  Tensor weights;  // [out_dim x in_dim]
  Tensor bias;     // [out_dim]
  Activation activation = Activation::relu;

  std::size_t in_dim() const { return weights.cols(); }
  std::size_t out_dim() const { return weights.rows(); }
};

// Gradients produced by one backward pass, in layer order, plus the
// gradient with respect to the batch inputs.
struct ExtractorGradients {
  std::vector<Tensor> weights;
  std::vector<Tensor> bias;
  Tensor inputs;  // [B x in_dim]
};

// A small fully connected feature extractor. The layer list may be empty,
// in which case features are the inputs themselves.
class FeatureExtractor {
 public:
  FeatureExtractor() = default;
  FeatureExtractor(std::size_t in_dim, std::vector<DenseLayer> layers);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t feature_dim() const { return feature_dim_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  // Runs the batch through the network and caches per-layer inputs and
  // pre-activations for a subsequent backward().
  Tensor forward(const Tensor& batch_inputs);

  // Forward pass without touching the cache; safe on a const extractor.
  Tensor infer(const Tensor& batch_inputs) const;

  // Backpropagates grad_features [B x feature_dim] through the cached
  // forward pass. ReLU passes gradient only where the pre-activation is
  // strictly positive. Throws std::logic_error without a cached forward.
  ExtractorGradients backward(const Tensor& grad_features) const;

 private:
  std::size_t in_dim_ = 0;
  std::size_t feature_dim_ = 0;
  std::vector<DenseLayer> layers_;

  struct Cache {
    bool valid = false;
    std::vector<Tensor> layer_inputs;     // x_0 = batch, x_{l+1} = act(z_l)
    std::vector<Tensor> pre_activations;  // z_l
  };
  Cache cache_;
};

// Uniform weight init in [-1/sqrt(in_dim), +1/sqrt(in_dim)], zero bias.
DenseLayer make_dense_layer(std::size_t in_dim, std::size_t out_dim, Activation activation,
                            std::mt19937_64& rng);

// ReLU MLP with the given hidden layer sizes; the last hidden size is the
// feature dimension.
FeatureExtractor make_mlp(std::size_t in_dim, const std::vector<std::size_t>& hidden_sizes,
                          std::mt19937_64& rng);

// y = x * W^T + b for a batch of row vectors.
Tensor affine(const Tensor& x, const Tensor& weights, const Tensor& bias);

}  // namespace oodlab
