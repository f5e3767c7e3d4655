#include "oodlab/network.hpp"

#include <cmath>
#include <stdexcept>

namespace oodlab {

std::string activation_name(Activation a) {
  return a == Activation::relu ? "relu" : "identity";
}

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "identity") return Activation::identity;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

Tensor affine(const Tensor& x, const Tensor& weights, const Tensor& bias) {
  const std::size_t batch = x.rows();
  const std::size_t in = x.cols();
  const std::size_t out = weights.rows();
  if (weights.cols() != in) {
    throw std::invalid_argument("affine: input dim " + std::to_string(in) +
                                " does not match weight dim " + std::to_string(weights.cols()));
  }
  if (bias.rank() != 1 || bias.dim(0) != out) {
    throw std::invalid_argument("affine: bias shape does not match output dim");
  }
  Tensor y({batch, out});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t o = 0; o < out; ++o) {
      double acc = bias(o);
      for (std::size_t i = 0; i < in; ++i) {
        acc += weights(o, i) * x(b, i);
      }
      y(b, o) = acc;
    }
  }
  return y;
}

namespace {

void apply_activation(Tensor& t, Activation a) {
  if (a == Activation::identity) return;
  for (double& v : t.values()) {
    if (v < 0.0) v = 0.0;
  }
}

void check_batch(const Tensor& batch, std::size_t expected_cols, const char* what) {
  if (batch.rank() != 2 || batch.cols() != expected_cols) {
    throw std::invalid_argument(std::string(what) + ": expected [B x " +
                                std::to_string(expected_cols) + "] input");
  }
  if (!batch.all_finite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entries in input");
  }
}

}  // namespace

FeatureExtractor::FeatureExtractor(std::size_t in_dim, std::vector<DenseLayer> layers)
    : in_dim_(in_dim), feature_dim_(in_dim), layers_(std::move(layers)) {
  if (in_dim_ == 0) {
    throw std::invalid_argument("feature extractor input dim must be positive");
  }
  std::size_t expected = in_dim_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].in_dim() != expected) {
      throw std::invalid_argument("layer " + std::to_string(l) + " expects input dim " +
                                  std::to_string(layers_[l].in_dim()) + " but receives " +
                                  std::to_string(expected));
    }
    if (layers_[l].bias.rank() != 1 || layers_[l].bias.dim(0) != layers_[l].out_dim()) {
      throw std::invalid_argument("layer " + std::to_string(l) + " bias shape mismatch");
    }
    expected = layers_[l].out_dim();
  }
  feature_dim_ = expected;
}

Tensor FeatureExtractor::forward(const Tensor& batch_inputs) {
  check_batch(batch_inputs, in_dim_, "forward");
  cache_.layer_inputs.clear();
  cache_.pre_activations.clear();
  Tensor x = batch_inputs;
  for (const DenseLayer& layer : layers_) {
    cache_.layer_inputs.push_back(x);
    Tensor z = affine(x, layer.weights, layer.bias);
    cache_.pre_activations.push_back(z);
    apply_activation(z, layer.activation);
    x = std::move(z);
  }
  cache_.layer_inputs.push_back(x);  // final features, kept for shape checks
  cache_.valid = true;
  return x;
}

Tensor FeatureExtractor::infer(const Tensor& batch_inputs) const {
  check_batch(batch_inputs, in_dim_, "infer");
  Tensor x = batch_inputs;
  for (const DenseLayer& layer : layers_) {
    Tensor z = affine(x, layer.weights, layer.bias);
    apply_activation(z, layer.activation);
    x = std::move(z);
  }
  return x;
}

ExtractorGradients FeatureExtractor::backward(const Tensor& grad_features) const {
  if (!cache_.valid) {
    throw std::logic_error("backward called without a cached forward pass");
  }
  const Tensor& features = cache_.layer_inputs.back();
  if (!grad_features.same_shape(features)) {
    throw std::invalid_argument("backward: gradient shape does not match cached features");
  }

  ExtractorGradients grads;
  grads.weights.resize(layers_.size());
  grads.bias.resize(layers_.size());

  Tensor g = grad_features;  // dL/d(activation of layer l)
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const DenseLayer& layer = layers_[li];
    const Tensor& z = cache_.pre_activations[li];
    const Tensor& x = cache_.layer_inputs[li];
    const std::size_t batch = g.rows();
    const std::size_t out = layer.out_dim();
    const std::size_t in = layer.in_dim();

    Tensor dz = g;
    if (layer.activation == Activation::relu) {
      for (std::size_t i = 0; i < dz.size(); ++i) {
        if (z(i) <= 0.0) dz(i) = 0.0;
      }
    }

    Tensor gw({out, in});
    Tensor gb({out});
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t o = 0; o < out; ++o) {
        const double d = dz(b, o);
        gb(o) += d;
        for (std::size_t i = 0; i < in; ++i) {
          gw(o, i) += d * x(b, i);
        }
      }
    }

    Tensor gx({batch, in});
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t o = 0; o < out; ++o) {
        const double d = dz(b, o);
        if (d == 0.0) continue;
        for (std::size_t i = 0; i < in; ++i) {
          gx(b, i) += d * layer.weights(o, i);
        }
      }
    }

    grads.weights[li] = std::move(gw);
    grads.bias[li] = std::move(gb);
    g = std::move(gx);
  }
  grads.inputs = std::move(g);
  return grads;
}

DenseLayer make_dense_layer(std::size_t in_dim, std::size_t out_dim, Activation activation,
                            std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
  std::uniform_real_distribution<double> dist(-bound, bound);
  DenseLayer layer;
  layer.weights = Tensor({out_dim, in_dim});
  for (double& w : layer.weights.values()) {
    w = dist(rng);
  }
  layer.bias = Tensor({out_dim});
  layer.activation = activation;
  return layer;
}

FeatureExtractor make_mlp(std::size_t in_dim, const std::vector<std::size_t>& hidden_sizes,
                          std::mt19937_64& rng) {
  std::vector<DenseLayer> layers;
  std::size_t prev = in_dim;
  for (std::size_t size : hidden_sizes) {
    layers.push_back(make_dense_layer(prev, size, Activation::relu, rng));
    prev = size;
  }
  return FeatureExtractor(in_dim, std::move(layers));
}

}  // namespace oodlab
