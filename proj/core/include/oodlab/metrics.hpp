#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace oodlab {

// One detection score with its ground truth. Higher score means more
// in-distribution; in-distribution is the positive class throughout.
struct ScoredSample {
  double score = 0.0;
  bool is_in_distribution = false;
};

struct RocPoint {
  double threshold = 0.0;  // a sample is classified in-distribution iff score > threshold
  double tpr = 0.0;
  double fpr = 0.0;
};

// ROC points ordered by ascending threshold: one point per distinct score
// value plus -inf and +inf boundaries, so TPR and FPR are non-increasing
// along the list and the endpoints are (1,1) and (0,0).
struct RocCurve {
  std::vector<RocPoint> points;
};

struct DetectionReport {
  double tnr_at_tpr95 = 0.0;
  double auroc = 0.0;
  double dtacc = 0.0;
  std::size_t num_in = 0;
  std::size_t num_out = 0;
};

// All functions require at least one in-distribution and one
// out-of-distribution sample and throw std::invalid_argument otherwise.

RocCurve roc_curve(std::span<const ScoredSample> samples);

// Trapezoidal area under the ROC curve; equals the Mann-Whitney statistic
// P(score_in > score_out) + 0.5 * P(tie).
double auroc(std::span<const ScoredSample> samples);

// TNR at the largest threshold still accepting >= 95% of in-distribution
// samples. Thresholds are the distinct score values; no interpolation.
double tnr_at_tpr95(std::span<const ScoredSample> samples);

// 1 - min over thresholds of 0.5 * (P_in(score <= d) + P_out(score > d)),
// i.e. detection accuracy under equal priors.
double dtacc(std::span<const ScoredSample> samples);

DetectionReport detection_report(std::span<const ScoredSample> samples);

}  // namespace oodlab
