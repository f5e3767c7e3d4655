#pragma once

#include <span>
#include <string>

#include "oodlab/tensor.hpp"

namespace oodlab {

enum class ScoreKind { entropic, mps };

std::string score_name(ScoreKind kind);
ScoreKind score_from_name(const std::string& name);

// Probability rows must sum to 1 within this tolerance.
inline constexpr double kProbabilitySumTolerance = 1e-6;

// Shannon entropy -sum p log p in nats, with 0 log 0 := 0.
double entropy(std::span<const double> p);

// Negative entropy; in [-log C, 0]. Higher means more in-distribution.
double entropic_score(std::span<const double> p);

// max_i p_i; in [1/C, 1]. Higher means more in-distribution.
double max_probability_score(std::span<const double> p);

double sample_score(ScoreKind kind, std::span<const double> p);

// Arithmetic mean of per-row entropies of an [N x C] probability matrix.
double mean_entropy(const Tensor& probabilities);

}  // namespace oodlab
