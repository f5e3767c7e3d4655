#include "oodlab/heads.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "oodlab/network.hpp"

namespace oodlab {

std::string head_name(HeadKind kind) { return kind == HeadKind::softmax ? "softmax" : "isomax"; }

HeadKind head_from_name(const std::string& name) {
  if (name == "softmax") return HeadKind::softmax;
  if (name == "isomax") return HeadKind::isomax;
  throw std::invalid_argument("unknown head '" + name + "' (expected softmax or isomax)");
}

namespace {

void check_features(const Tensor& features, std::size_t feature_dim, const char* what) {
  if (features.rank() != 2 || features.cols() != feature_dim) {
    throw std::invalid_argument(std::string(what) + ": expected features [B x " +
                                std::to_string(feature_dim) + "]");
  }
  if (!features.all_finite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite feature entries");
  }
}

void check_targets(const std::vector<int>& targets, std::size_t batch, std::size_t num_classes,
                   const char* what) {
  if (targets.size() != batch) {
    throw std::invalid_argument(std::string(what) + ": target count does not match batch size");
  }
  for (int t : targets) {
    if (t < 0 || static_cast<std::size_t>(t) >= num_classes) {
      throw std::out_of_range(std::string(what) + ": target " + std::to_string(t) +
                              " outside [0, " + std::to_string(num_classes) + ")");
    }
  }
}

// Per-row negative log likelihood of the target class given logits, plus
// the probability row. `mode` selects between the fused log-sum-exp form
// and the sequential probabilities-then-log form; both subtract the row
// maximum first.
double row_nll(const Tensor& logits, std::size_t row, int target, LogMode mode,
               Tensor& probabilities) {
  const std::size_t c = logits.cols();
  double max_logit = logits(row, 0);
  for (std::size_t j = 1; j < c; ++j) {
    max_logit = std::max(max_logit, logits(row, j));
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < c; ++j) {
    sum += std::exp(logits(row, j) - max_logit);
  }
  for (std::size_t j = 0; j < c; ++j) {
    probabilities(row, j) = std::exp(logits(row, j) - max_logit) / sum;
  }
  if (mode == LogMode::sequential) {
    return -std::log(probabilities(row, static_cast<std::size_t>(target)));
  }
  return std::log(sum) - (logits(row, static_cast<std::size_t>(target)) - max_logit);
}

}  // namespace

Tensor softmax_rows(const Tensor& logits) {
  Tensor probs({logits.rows(), logits.cols()});
  const std::size_t c = logits.cols();
  for (std::size_t b = 0; b < logits.rows(); ++b) {
    double max_logit = logits(b, 0);
    for (std::size_t j = 1; j < c; ++j) {
      max_logit = std::max(max_logit, logits(b, j));
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      sum += std::exp(logits(b, j) - max_logit);
    }
    for (std::size_t j = 0; j < c; ++j) {
      probs(b, j) = std::exp(logits(b, j) - max_logit) / sum;
    }
  }
  return probs;
}

SoftMaxHead make_softmax_head(std::size_t num_classes, std::size_t feature_dim,
                              std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(feature_dim));
  std::uniform_real_distribution<double> dist(-bound, bound);
  SoftMaxHead head;
  head.weights = Tensor({num_classes, feature_dim});
  for (double& w : head.weights.values()) {
    w = dist(rng);
  }
  head.biases = Tensor({num_classes});
  return head;
}

IsoMaxHead make_isomax_head(std::size_t num_classes, std::size_t feature_dim,
                            double entropic_scale) {
  if (!(entropic_scale > 0.0)) {
    throw std::invalid_argument("entropic_scale must be positive");
  }
  IsoMaxHead head;
  head.prototypes = Tensor({num_classes, feature_dim});  // all zeros
  head.entropic_scale = entropic_scale;
  return head;
}

Tensor softmax_logits(const SoftMaxHead& head, const Tensor& features) {
  check_features(features, head.feature_dim(), "softmax_logits");
  return affine(features, head.weights, head.biases);
}

Tensor softmax_probabilities(const SoftMaxHead& head, const Tensor& features) {
  return softmax_rows(softmax_logits(head, features));
}

LossResult softmax_loss(const SoftMaxHead& head, const Tensor& features,
                        const std::vector<int>& targets, LogMode mode) {
  check_features(features, head.feature_dim(), "softmax_loss");
  const std::size_t batch = features.rows();
  const std::size_t c = head.num_classes();
  const std::size_t f = head.feature_dim();
  check_targets(targets, batch, c, "softmax_loss");

  const Tensor logits = affine(features, head.weights, head.biases);

  LossResult result;
  result.probabilities = Tensor({batch, c});
  double total = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    total += row_nll(logits, b, targets[b], mode, result.probabilities);
  }
  result.loss = total / static_cast<double>(batch);

  // dL/dlogit = (p - onehot) / B, then the affine chain rule.
  result.grad_features = Tensor({batch, f});
  Tensor grad_weights({c, f});
  Tensor grad_biases({c});
  const double inv_batch = 1.0 / static_cast<double>(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < c; ++j) {
      double dlogit = result.probabilities(b, j) * inv_batch;
      if (static_cast<std::size_t>(targets[b]) == j) dlogit -= inv_batch;
      grad_biases(j) += dlogit;
      for (std::size_t i = 0; i < f; ++i) {
        grad_weights(j, i) += dlogit * features(b, i);
        result.grad_features(b, i) += dlogit * head.weights(j, i);
      }
    }
  }
  result.grad_head_params = {std::move(grad_weights), std::move(grad_biases)};
  return result;
}

Tensor isomax_distances(const IsoMaxHead& head, const Tensor& features) {
  check_features(features, head.feature_dim(), "isomax_distances");
  const std::size_t batch = features.rows();
  const std::size_t c = head.num_classes();
  const std::size_t f = head.feature_dim();
  Tensor distances({batch, c});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < c; ++j) {
      double sq = kDistanceEpsilon;
      for (std::size_t i = 0; i < f; ++i) {
        const double diff = features(b, i) - head.prototypes(j, i);
        sq += diff * diff;
      }
      distances(b, j) = std::sqrt(sq);
    }
  }
  return distances;
}

Tensor isomax_training_probabilities(const IsoMaxHead& head, const Tensor& features) {
  Tensor logits = isomax_distances(head, features);
  for (double& v : logits.values()) {
    v *= -head.entropic_scale;
  }
  return softmax_rows(logits);
}

Tensor isomax_probabilities(const IsoMaxHead& head, const Tensor& features) {
  Tensor logits = isomax_distances(head, features);
  for (double& v : logits.values()) {
    v = -v;
  }
  return softmax_rows(logits);
}

LossResult isomax_loss(const IsoMaxHead& head, const Tensor& features,
                       const std::vector<int>& targets, LogMode mode) {
  check_features(features, head.feature_dim(), "isomax_loss");
  if (!(head.entropic_scale > 0.0)) {
    throw std::invalid_argument("isomax_loss: entropic_scale must be positive");
  }
  const std::size_t batch = features.rows();
  const std::size_t c = head.num_classes();
  const std::size_t f = head.feature_dim();
  check_targets(targets, batch, c, "isomax_loss");

  const Tensor distances = isomax_distances(head, features);
  Tensor logits({batch, c});
  for (std::size_t i = 0; i < logits.size(); ++i) {
    logits(i) = -head.entropic_scale * distances(i);
  }

  LossResult result;
  result.probabilities = Tensor({batch, c});
  double total = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    total += row_nll(logits, b, targets[b], mode, result.probabilities);
  }
  result.loss = total / static_cast<double>(batch);

  // dL/dlogit = (p - onehot) / B; logit = -E_s * d;
  // dd/df = (f - p_j) / d and dd/dp_j = -(f - p_j) / d, with d already
  // carrying the epsilon stabilizer.
  result.grad_features = Tensor({batch, f});
  Tensor grad_prototypes({c, f});
  const double inv_batch = 1.0 / static_cast<double>(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t j = 0; j < c; ++j) {
      double dlogit = result.probabilities(b, j) * inv_batch;
      if (static_cast<std::size_t>(targets[b]) == j) dlogit -= inv_batch;
      const double scale = -head.entropic_scale * dlogit / distances(b, j);
      for (std::size_t i = 0; i < f; ++i) {
        const double diff = features(b, i) - head.prototypes(j, i);
        result.grad_features(b, i) += scale * diff;
        grad_prototypes(j, i) -= scale * diff;
      }
    }
  }
  result.grad_head_params = {std::move(grad_prototypes)};
  return result;
}

namespace {

std::vector<int> argmax_rows(const Tensor& m) {
  std::vector<int> out(m.rows());
  for (std::size_t b = 0; b < m.rows(); ++b) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < m.cols(); ++j) {
      if (m(b, j) > m(b, best)) best = j;
    }
    out[b] = static_cast<int>(best);
  }
  return out;
}

}  // namespace

std::vector<int> predict(const SoftMaxHead& head, const Tensor& features) {
  return argmax_rows(softmax_probabilities(head, features));
}

std::vector<int> predict(const IsoMaxHead& head, const Tensor& features) {
  return argmax_rows(isomax_probabilities(head, features));
}

std::vector<int> nearest_prototype(const IsoMaxHead& head, const Tensor& features) {
  const Tensor distances = isomax_distances(head, features);
  std::vector<int> out(distances.rows());
  for (std::size_t b = 0; b < distances.rows(); ++b) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < distances.cols(); ++j) {
      if (distances(b, j) < distances(b, best)) best = j;
    }
    out[b] = static_cast<int>(best);
  }
  return out;
}

}  // namespace oodlab
