#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "oodlab/heads.hpp"
#include "oodlab/optimizer.hpp"

namespace oodlab {

enum class DatasetKind { blobs, idx };

// One experiment, fully determined by these fields plus the seed. Loaded
// from a flat key = value file; every key mirrors a field and unknown or
// duplicate keys are errors.
struct ExperimentConfig {
  std::string run_id = "run";

  DatasetKind dataset = DatasetKind::blobs;
  // blobs
  int blob_classes = 4;
  int blob_dim = 2;
  double blob_radius = 4.0;
  double blob_sigma = 1.0;
  int blob_samples_per_class = 250;
  double ood_ring_radius = 12.0;
  // idx
  std::string idx_train_images, idx_train_labels;
  std::string idx_test_images, idx_test_labels;
  std::string idx_ood_images, idx_ood_labels;

  std::vector<std::size_t> hidden_layers = {32, 32};
  HeadKind head = HeadKind::isomax;
  double entropic_scale = 10.0;

  SgdConfig sgd;  // defaults: lr 0.1, momentum 0.9, wd 1e-4, decay {15,20,25} x10

  int epochs = 30;
  int batch_size = 64;
  std::uint64_t seed = 1;
  std::string output_dir = "runs";
};

// Throws std::invalid_argument with the offending key/line on any problem.
ExperimentConfig parse_config(std::istream& in, const std::string& origin = "config");
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& config);

// Comma-separated integer/double list parsing, shared with the CLI.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace oodlab
