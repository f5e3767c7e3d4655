#include "oodlab/scores.hpp"

#include <cmath>
#include <stdexcept>

namespace oodlab {

std::string score_name(ScoreKind kind) {
  return kind == ScoreKind::entropic ? "entropic" : "mps";
}

ScoreKind score_from_name(const std::string& name) {
  if (name == "entropic") return ScoreKind::entropic;
  if (name == "mps") return ScoreKind::mps;
  throw std::invalid_argument("unknown score '" + name + "' (expected entropic or mps)");
}

namespace {

void check_probability_vector(std::span<const double> p) {
  if (p.empty()) {
    throw std::invalid_argument("probability vector is empty");
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("probability entry is negative or NaN");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
    throw std::invalid_argument("probability vector sums to " + std::to_string(sum) +
                                ", outside the 1e-6 tolerance");
  }
}

}  // namespace

double entropy(std::span<const double> p) {
  check_probability_vector(p);
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double entropic_score(std::span<const double> p) { return -entropy(p); }

double max_probability_score(std::span<const double> p) {
  check_probability_vector(p);
  double best = p[0];
  for (double v : p) {
    best = std::max(best, v);
  }
  return best;
}

double sample_score(ScoreKind kind, std::span<const double> p) {
  return kind == ScoreKind::entropic ? entropic_score(p) : max_probability_score(p);
}

double mean_entropy(const Tensor& probabilities) {
  if (probabilities.rank() != 2 || probabilities.rows() == 0) {
    throw std::invalid_argument("mean_entropy expects a non-empty [N x C] matrix");
  }
  const std::size_t n = probabilities.rows();
  const std::size_t c = probabilities.cols();
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    total += entropy(std::span<const double>(probabilities.data() + r * c, c));
  }
  return total / static_cast<double>(n);
}

}  // namespace oodlab
