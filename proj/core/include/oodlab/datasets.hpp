#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oodlab/tensor.hpp"

namespace oodlab {

struct LabeledDataset {
  Tensor inputs;            // [N x in_dim]
  std::vector<int> labels;  // in [0, num_classes)
  int num_classes = 0;
  std::string name;

  std::size_t size() const { return inputs.rows(); }
  std::size_t dim() const { return inputs.cols(); }
};

// Synthetic Gaussian blob generator. Class means sit at distance
// cluster_radius from the origin: uniformly on the circle for dim == 2,
// otherwise on signed canonical axes (so at most 2 * dim classes).
struct BlobSpec {
  int num_classes = 4;
  int dim = 2;
  double cluster_radius = 4.0;
  double cluster_sigma = 1.0;
  int samples_per_class = 250;
  std::uint64_t seed = 1;
};

// Deterministic per seed. Samples are grouped by class, class j first.
LabeledDataset generate_blobs(const BlobSpec& spec);

// Out-of-distribution set: points uniform on the sphere of ring_radius plus
// isotropic Gaussian noise of spec.cluster_sigma. Requires
// ring_radius > cluster_radius + 3 * cluster_sigma so the supports stay
// disjoint with high probability. Labels are all 0.
LabeledDataset generate_ood_ring(const BlobSpec& spec, double ring_radius);

// IDX binary image format, big-endian: magic 0x00000803 with three u32
// dimensions (count, rows, cols) and unsigned-byte pixels for images, magic
// 0x00000801 with one u32 dimension and unsigned-byte labels. Pixels are
// scaled to [0,1] and images flattened to rows * cols inputs.
LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path);

// Writes inputs (values in [0,1], rounded to bytes) as an n x 1 x dim image
// file and labels as a label file. Reloading reproduces the pixels of a
// byte-quantized dataset bit-exactly.
void save_idx(const LabeledDataset& dataset, const std::string& images_path,
              const std::string& labels_path);

// Concatenation of the in-distribution test set and one OOD set with
// ground-truth flags, in-distribution first.
struct ComposedTestSet {
  Tensor inputs;                 // [(N_in + N_out) x dim]
  std::vector<std::uint8_t> is_in_distribution;
};

ComposedTestSet compose_test_set(const LabeledDataset& in_test, const LabeledDataset& ood);

}  // namespace oodlab
