#include "oodlab/model.hpp"

#include <stdexcept>

namespace oodlab {

HeadKind head_kind(const Head& head) {
  return std::holds_alternative<SoftMaxHead>(head) ? HeadKind::softmax : HeadKind::isomax;
}

std::size_t head_num_classes(const Head& head) {
  return std::visit([](const auto& h) { return h.num_classes(); }, head);
}

namespace {

LossResult loss_of(const SoftMaxHead& h, const Tensor& f, const std::vector<int>& t) {
  return softmax_loss(h, f, t);
}

LossResult loss_of(const IsoMaxHead& h, const Tensor& f, const std::vector<int>& t) {
  return isomax_loss(h, f, t);
}

}  // namespace

LossResult head_loss(const Head& head, const Tensor& features, const std::vector<int>& targets) {
  return std::visit([&](const auto& h) { return loss_of(h, features, targets); }, head);
}

Tensor inference_probabilities(const Model& model, const Tensor& inputs) {
  const Tensor features = model.extractor.infer(inputs);
  if (const auto* sm = std::get_if<SoftMaxHead>(&model.head)) {
    return softmax_probabilities(*sm, features);
  }
  return isomax_probabilities(std::get<IsoMaxHead>(model.head), features);
}

Tensor training_probabilities(const Model& model, const Tensor& inputs) {
  const Tensor features = model.extractor.infer(inputs);
  if (const auto* sm = std::get_if<SoftMaxHead>(&model.head)) {
    return softmax_probabilities(*sm, features);
  }
  return isomax_training_probabilities(std::get<IsoMaxHead>(model.head), features);
}

std::vector<int> predict(const Model& model, const Tensor& inputs) {
  const Tensor features = model.extractor.infer(inputs);
  return std::visit([&](const auto& h) { return predict(h, features); }, model.head);
}

double accuracy(const Model& model, const LabeledDataset& data) {
  if (data.size() == 0) {
    throw std::invalid_argument("accuracy: empty dataset");
  }
  const std::vector<int> predicted = predict(model, data.inputs);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

}  // namespace oodlab
