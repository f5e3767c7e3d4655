#include "oodlab/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

namespace oodlab {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

void check_blob_spec(const BlobSpec& spec) {
  if (spec.num_classes <= 0 || spec.dim <= 0 || spec.samples_per_class <= 0) {
    throw std::invalid_argument("blob spec counts must be positive");
  }
  if (!(spec.cluster_radius > 0.0) || spec.cluster_sigma < 0.0) {
    throw std::invalid_argument("blob spec radius must be positive and sigma non-negative");
  }
  if (spec.dim != 2 && spec.num_classes > 2 * spec.dim) {
    throw std::invalid_argument("axis placement supports at most 2 * dim classes");
  }
}

std::vector<double> class_mean(const BlobSpec& spec, int cls) {
  std::vector<double> mean(spec.dim, 0.0);
  if (spec.dim == 2) {
    const double angle = 2.0 * std::numbers::pi * cls / spec.num_classes;
    mean[0] = spec.cluster_radius * std::cos(angle);
    mean[1] = spec.cluster_radius * std::sin(angle);
  } else {
    const int axis = cls % spec.dim;
    const double sign = cls < spec.dim ? 1.0 : -1.0;
    mean[axis] = sign * spec.cluster_radius;
  }
  return mean;
}

}  // namespace

LabeledDataset generate_blobs(const BlobSpec& spec) {
  check_blob_spec(spec);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  const std::size_t n = static_cast<std::size_t>(spec.num_classes) * spec.samples_per_class;
  LabeledDataset data;
  data.inputs = Tensor({n, static_cast<std::size_t>(spec.dim)});
  data.labels.reserve(n);
  data.num_classes = spec.num_classes;
  data.name = "blobs";

  std::size_t row = 0;
  for (int cls = 0; cls < spec.num_classes; ++cls) {
    const std::vector<double> mean = class_mean(spec, cls);
    for (int s = 0; s < spec.samples_per_class; ++s, ++row) {
      for (int d = 0; d < spec.dim; ++d) {
        data.inputs(row, d) = mean[d] + spec.cluster_sigma * noise(rng);
      }
      data.labels.push_back(cls);
    }
  }
  return data;
}

LabeledDataset generate_ood_ring(const BlobSpec& spec, double ring_radius) {
  check_blob_spec(spec);
  if (!(ring_radius > spec.cluster_radius + 3.0 * spec.cluster_sigma)) {
    throw std::invalid_argument(
        "ring_radius must exceed cluster_radius + 3 * cluster_sigma to keep the "
        "out-distribution separated");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  const std::size_t n = static_cast<std::size_t>(spec.num_classes) * spec.samples_per_class;
  const std::size_t dim = static_cast<std::size_t>(spec.dim);
  LabeledDataset data;
  data.inputs = Tensor({n, dim});
  data.labels.assign(n, 0);
  data.num_classes = 1;
  data.name = "ring";

  std::vector<double> direction(dim);
  for (std::size_t row = 0; row < n; ++row) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        direction[d] = noise(rng);
        norm += direction[d] * direction[d];
      }
      norm = std::sqrt(norm);
    } while (norm < 1e-12);
    for (std::size_t d = 0; d < dim; ++d) {
      data.inputs(row, d) = ring_radius * direction[d] / norm + spec.cluster_sigma * noise(rng);
    }
  }
  return data;
}

namespace {

std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw std::runtime_error(path + ": truncated IDX header");
  }
  return (std::uint32_t(bytes[0]) << 24) | (std::uint32_t(bytes[1]) << 16) |
         (std::uint32_t(bytes[2]) << 8) | std::uint32_t(bytes[3]);
}

void write_u32_be(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {static_cast<unsigned char>(v >> 24),
                                  static_cast<unsigned char>(v >> 16),
                                  static_cast<unsigned char>(v >> 8),
                                  static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::vector<unsigned char> read_payload(std::istream& in, std::size_t count,
                                        const std::string& path) {
  std::vector<unsigned char> payload(count);
  if (!in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(count))) {
    throw std::runtime_error(path + ": truncated IDX payload");
  }
  return payload;
}

}  // namespace

LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path) {
  std::ifstream images(images_path, std::ios::binary);
  if (!images) {
    throw std::runtime_error(images_path + ": cannot open");
  }
  const std::uint32_t images_magic = read_u32_be(images, images_path);
  if (images_magic != kImagesMagic) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", images_magic);
    throw std::runtime_error(images_path + ": bad IDX image magic " + buf);
  }
  const std::uint32_t count = read_u32_be(images, images_path);
  const std::uint32_t rows = read_u32_be(images, images_path);
  const std::uint32_t cols = read_u32_be(images, images_path);
  if (count == 0 || rows == 0 || cols == 0) {
    throw std::runtime_error(images_path + ": zero-sized IDX dimensions");
  }
  const std::size_t pixels_per_image = std::size_t(rows) * cols;
  const std::vector<unsigned char> pixels =
      read_payload(images, std::size_t(count) * pixels_per_image, images_path);

  std::ifstream labels(labels_path, std::ios::binary);
  if (!labels) {
    throw std::runtime_error(labels_path + ": cannot open");
  }
  const std::uint32_t labels_magic = read_u32_be(labels, labels_path);
  if (labels_magic != kLabelsMagic) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", labels_magic);
    throw std::runtime_error(labels_path + ": bad IDX label magic " + buf);
  }
  const std::uint32_t label_count = read_u32_be(labels, labels_path);
  if (label_count != count) {
    throw std::runtime_error(labels_path + ": " + std::to_string(label_count) +
                             " labels for " + std::to_string(count) + " images");
  }
  const std::vector<unsigned char> raw_labels = read_payload(labels, label_count, labels_path);

  LabeledDataset data;
  data.inputs = Tensor({count, pixels_per_image});
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    data.inputs(i) = pixels[i] / 255.0;
  }
  data.labels.reserve(label_count);
  int max_label = 0;
  for (unsigned char l : raw_labels) {
    data.labels.push_back(l);
    max_label = std::max(max_label, int(l));
  }
  data.num_classes = max_label + 1;
  data.name = std::filesystem::path(images_path).stem().string();
  return data;
}

void save_idx(const LabeledDataset& dataset, const std::string& images_path,
              const std::string& labels_path) {
  std::ofstream images(images_path, std::ios::binary);
  if (!images) {
    throw std::runtime_error(images_path + ": cannot open for writing");
  }
  write_u32_be(images, kImagesMagic);
  write_u32_be(images, static_cast<std::uint32_t>(dataset.size()));
  write_u32_be(images, 1);
  write_u32_be(images, static_cast<std::uint32_t>(dataset.dim()));
  for (double v : dataset.inputs.values()) {
    const long pixel = std::lround(v * 255.0);
    if (pixel < 0 || pixel > 255) {
      throw std::invalid_argument("save_idx: input value outside [0, 1]");
    }
    const unsigned char byte = static_cast<unsigned char>(pixel);
    images.write(reinterpret_cast<const char*>(&byte), 1);
  }
  if (!images) {
    throw std::runtime_error(images_path + ": write failed");
  }

  std::ofstream labels(labels_path, std::ios::binary);
  if (!labels) {
    throw std::runtime_error(labels_path + ": cannot open for writing");
  }
  write_u32_be(labels, kLabelsMagic);
  write_u32_be(labels, static_cast<std::uint32_t>(dataset.size()));
  for (int l : dataset.labels) {
    if (l < 0 || l > 255) {
      throw std::invalid_argument("save_idx: label outside byte range");
    }
    const unsigned char byte = static_cast<unsigned char>(l);
    labels.write(reinterpret_cast<const char*>(&byte), 1);
  }
  if (!labels) {
    throw std::runtime_error(labels_path + ": write failed");
  }
}

ComposedTestSet compose_test_set(const LabeledDataset& in_test, const LabeledDataset& ood) {
  if (in_test.size() == 0 || ood.size() == 0) {
    throw std::invalid_argument("compose_test_set: both datasets must be non-empty");
  }
  if (in_test.dim() != ood.dim()) {
    throw std::invalid_argument("compose_test_set: input dims differ (" +
                                std::to_string(in_test.dim()) + " vs " +
                                std::to_string(ood.dim()) + ")");
  }
  ComposedTestSet composed;
  const std::size_t total = in_test.size() + ood.size();
  composed.inputs = Tensor({total, in_test.dim()});
  composed.is_in_distribution.reserve(total);
  std::size_t row = 0;
  for (std::size_t r = 0; r < in_test.size(); ++r, ++row) {
    for (std::size_t d = 0; d < in_test.dim(); ++d) {
      composed.inputs(row, d) = in_test.inputs(r, d);
    }
    composed.is_in_distribution.push_back(1);
  }
  for (std::size_t r = 0; r < ood.size(); ++r, ++row) {
    for (std::size_t d = 0; d < ood.dim(); ++d) {
      composed.inputs(row, d) = ood.inputs(r, d);
    }
    composed.is_in_distribution.push_back(0);
  }
  return composed;
}

}  // namespace oodlab
