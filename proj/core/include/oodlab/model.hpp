#pragma once

#include <variant>
#include <vector>

#include "oodlab/datasets.hpp"
#include "oodlab/heads.hpp"
#include "oodlab/network.hpp"

namespace oodlab {

using Head = std::variant<SoftMaxHead, IsoMaxHead>;

// Feature extractor plus classifier head; everything a checkpoint stores.
struct Model {
  FeatureExtractor extractor;
  Head head;
};

HeadKind head_kind(const Head& head);
std::size_t head_num_classes(const Head& head);

LossResult head_loss(const Head& head, const Tensor& features, const std::vector<int>& targets);

// Probabilities used for scoring and prediction: softmax over affine logits
// for SoftMaxHead, the scale-free distance softmax for IsoMaxHead.
Tensor inference_probabilities(const Model& model, const Tensor& inputs);

// Probabilities the training loss sees (entropic scale applied for IsoMax).
Tensor training_probabilities(const Model& model, const Tensor& inputs);

std::vector<int> predict(const Model& model, const Tensor& inputs);

double accuracy(const Model& model, const LabeledDataset& data);

}  // namespace oodlab
