#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oodlab/tensor.hpp"

namespace oodlab {

enum class HeadKind { softmax, isomax };

std::string head_name(HeadKind kind);
HeadKind head_from_name(const std::string& name);

// Inner constant added under the square root of the class distances. The
// non-squared Euclidean distance has a gradient singularity where the
// feature coincides with a prototype; the stabilizer keeps both the value
// and the gradient finite there. Applied in forward and backward alike.
inline constexpr double kDistanceEpsilon = 1e-12;

// How the cross-entropy of a probability row is evaluated:
//   fused      - log-sum-exp log-softmax in one expression
//   sequential - normalize the probabilities first, then take the log as a
//                separate operation
enum class LogMode { fused, sequential };

// Affine classifier head: logits are w_j . f + b_j.
struct SoftMaxHead {
  Tensor weights;  // [C x feature_dim]
  Tensor biases;   // [C]

  std::size_t num_classes() const { return weights.rows(); }
  std::size_t feature_dim() const { return weights.cols(); }
};

// Distance-based classifier head. Logits are -E_s * d_j during training,
// where d_j is the non-squared Euclidean distance from the feature vector
// to the class prototype; the entropic scale E_s is dropped at inference.
// Prototypes start at zero and are learned like any other weight. There is
// no bias term, so this head has C fewer parameters than SoftMaxHead.
struct IsoMaxHead {
  Tensor prototypes;           // [C x feature_dim]
  double entropic_scale = 10.0;  // > 0, constant within one training run

  std::size_t num_classes() const { return prototypes.rows(); }
  std::size_t feature_dim() const { return prototypes.cols(); }
};

SoftMaxHead make_softmax_head(std::size_t num_classes, std::size_t feature_dim,
                              std::mt19937_64& rng);
IsoMaxHead make_isomax_head(std::size_t num_classes, std::size_t feature_dim,
                            double entropic_scale);

// Batch-mean loss with everything the training step needs. Probabilities
// are the training-path probabilities (for IsoMax: softmax over -E_s * d);
// every row sums to 1 within 1e-9. grad_head_params holds {weights, biases}
// for SoftMaxHead and {prototypes} for IsoMaxHead.
struct LossResult {
  double loss = 0.0;
  Tensor probabilities;  // [B x C]
  Tensor grad_features;  // [B x feature_dim]
  std::vector<Tensor> grad_head_params;
};

// Cross-entropy over softmax of affine logits, batch mean. Numerically
// stabilized by max-logit subtraction. Targets must lie in [0, C).
LossResult softmax_loss(const SoftMaxHead& head, const Tensor& features,
                        const std::vector<int>& targets, LogMode mode = LogMode::fused);

Tensor softmax_logits(const SoftMaxHead& head, const Tensor& features);
Tensor softmax_probabilities(const SoftMaxHead& head, const Tensor& features);

// Entry (i, j) is sqrt(sum_d (f_id - p_jd)^2 + kDistanceEpsilon).
Tensor isomax_distances(const IsoMaxHead& head, const Tensor& features);

// Cross-entropy over softmax of -E_s * d, batch mean. Defaults to the
// sequential log/probability evaluation; gradients flow through the
// stabilized square root.
LossResult isomax_loss(const IsoMaxHead& head, const Tensor& features,
                       const std::vector<int>& targets, LogMode mode = LogMode::sequential);

// Training-path probabilities: softmax over -E_s * d.
Tensor isomax_training_probabilities(const IsoMaxHead& head, const Tensor& features);

// Inference probabilities: softmax over -d, with the entropic scale removed.
Tensor isomax_probabilities(const IsoMaxHead& head, const Tensor& features);

// Argmax of the head's inference probabilities, ties broken toward the
// lowest class index. For IsoMaxHead this is the nearest-prototype class.
std::vector<int> predict(const SoftMaxHead& head, const Tensor& features);
std::vector<int> predict(const IsoMaxHead& head, const Tensor& features);

// Index of the closest prototype per row (lowest index wins ties).
std::vector<int> nearest_prototype(const IsoMaxHead& head, const Tensor& features);

// Row-wise stable softmax of an arbitrary logit matrix.
Tensor softmax_rows(const Tensor& logits);

}  // namespace oodlab
