#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "oodlab/datasets.hpp"
#include "temp_dir.hpp"

using namespace oodlab;

namespace {

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

// Two 1x2 images with pixels (0, 128) and (255, 64).
const std::vector<std::uint8_t> kImagesFixture = {
    0x00, 0x00, 0x08, 0x03,  // magic
    0x00, 0x00, 0x00, 0x02,  // count
    0x00, 0x00, 0x00, 0x01,  // rows
    0x00, 0x00, 0x00, 0x02,  // cols
    0, 128, 255, 64};

const std::vector<std::uint8_t> kLabelsFixture = {
    0x00, 0x00, 0x08, 0x01,  // magic
    0x00, 0x00, 0x00, 0x02,  // count
    1, 0};

}  // namespace

TEST_CASE("blobs are grouped by class around the configured means") {
  BlobSpec spec;
  spec.num_classes = 4;
  spec.dim = 2;
  spec.cluster_radius = 4.0;
  spec.cluster_sigma = 0.0;  // zero noise puts every sample exactly on its mean
  spec.samples_per_class = 3;
  const LabeledDataset data = generate_blobs(spec);

  CHECK(data.size() == 12);
  CHECK(data.dim() == 2);
  CHECK(data.num_classes == 4);
  CHECK(data.name == "blobs");
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(data.labels[i] == static_cast<int>(i / 3));
    const double radius = std::hypot(data.inputs(i, 0), data.inputs(i, 1));
    CHECK(radius == doctest::Approx(4.0).epsilon(1e-12));
  }
  // class 0 sits on the positive x axis, class 1 on the positive y axis
  CHECK(data.inputs(0, 0) == doctest::Approx(4.0));
  CHECK(std::abs(data.inputs(0, 1)) < 1e-12);
  CHECK(std::abs(data.inputs(3, 0)) < 1e-12);
  CHECK(data.inputs(3, 1) == doctest::Approx(4.0));
}

TEST_CASE("blobs in higher dimensions sit on signed axes") {
  BlobSpec spec;
  spec.num_classes = 6;
  spec.dim = 3;
  spec.cluster_sigma = 0.0;
  spec.samples_per_class = 1;
  const LabeledDataset data = generate_blobs(spec);
  CHECK(data.inputs(0, 0) == doctest::Approx(4.0));   // +x
  CHECK(data.inputs(3, 0) == doctest::Approx(-4.0));  // -x
  CHECK(data.inputs(4, 1) == doctest::Approx(-4.0));  // -y

  spec.num_classes = 7;
  CHECK_THROWS_AS(generate_blobs(spec), std::invalid_argument);
}

TEST_CASE("blob generation is deterministic per seed") {
  BlobSpec spec;
  spec.seed = 99;
  const LabeledDataset a = generate_blobs(spec);
  const LabeledDataset b = generate_blobs(spec);
  CHECK(a.inputs == b.inputs);
  spec.seed = 100;
  CHECK(generate_blobs(spec).inputs != a.inputs);
}

TEST_CASE("blob spec validation") {
  BlobSpec spec;
  spec.num_classes = 0;
  CHECK_THROWS_AS(generate_blobs(spec), std::invalid_argument);
  spec = BlobSpec{};
  spec.samples_per_class = -1;
  CHECK_THROWS_AS(generate_blobs(spec), std::invalid_argument);
  spec = BlobSpec{};
  spec.cluster_sigma = -0.5;
  CHECK_THROWS_AS(generate_blobs(spec), std::invalid_argument);
}

TEST_CASE("ring samples surround the blobs at the requested radius") {
  BlobSpec spec;
  spec.cluster_sigma = 0.0;
  spec.samples_per_class = 25;
  const LabeledDataset ring = generate_ood_ring(spec, 12.0);
  CHECK(ring.size() == 100);
  CHECK(ring.num_classes == 1);
  CHECK(ring.name == "ring");
  for (std::size_t i = 0; i < ring.size(); ++i) {
    CHECK(ring.labels[i] == 0);
    const double radius = std::hypot(ring.inputs(i, 0), ring.inputs(i, 1));
    CHECK(radius == doctest::Approx(12.0).epsilon(1e-9));  // sigma = 0: exact shell
  }
}

TEST_CASE("ring radius must clear the blob supports") {
  BlobSpec spec;  // radius 4, sigma 1 -> ring must exceed 7
  CHECK_THROWS_AS(generate_ood_ring(spec, 7.0), std::invalid_argument);
  CHECK_NOTHROW(generate_ood_ring(spec, 7.0 + 1e-6));
}

TEST_CASE("idx loading parses the fixture bit-exactly") {
  testutil::TempDir dir;
  const std::string images = dir.file("tiny-images.idx");
  const std::string labels = dir.file("tiny-labels.idx");
  write_bytes(images, kImagesFixture);
  write_bytes(labels, kLabelsFixture);

  const LabeledDataset data = load_idx(images, labels);
  CHECK(data.size() == 2);
  CHECK(data.dim() == 2);
  CHECK(data.num_classes == 2);
  CHECK(data.name == "tiny-images");
  CHECK(data.inputs(0, 0) == 0.0);
  CHECK(data.inputs(0, 1) == 128.0 / 255.0);
  CHECK(data.inputs(1, 0) == 1.0);
  CHECK(data.inputs(1, 1) == 64.0 / 255.0);
  CHECK(data.labels == std::vector<int>{1, 0});
}

TEST_CASE("idx loading rejects malformed files") {
  testutil::TempDir dir;
  const std::string labels = dir.file("labels.idx");
  write_bytes(labels, kLabelsFixture);

  SUBCASE("wrong magic") {
    auto bad = kImagesFixture;
    bad[3] = 0x04;
    const std::string images = dir.file("bad-magic.idx");
    write_bytes(images, bad);
    CHECK_THROWS_WITH_AS(load_idx(images, labels), doctest::Contains("magic"),
                         std::runtime_error);
  }
  SUBCASE("count mismatch between images and labels") {
    auto bad = kLabelsFixture;
    bad[7] = 0x03;
    bad.push_back(1);
    const std::string mismatched = dir.file("three-labels.idx");
    write_bytes(mismatched, bad);
    const std::string images = dir.file("images.idx");
    write_bytes(images, kImagesFixture);
    CHECK_THROWS_AS(load_idx(images, mismatched), std::runtime_error);
  }
  SUBCASE("truncated pixel payload") {
    auto bad = kImagesFixture;
    bad.pop_back();
    const std::string images = dir.file("truncated.idx");
    write_bytes(images, bad);
    CHECK_THROWS_AS(load_idx(images, labels), std::runtime_error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_idx(dir.file("absent.idx"), labels), std::runtime_error);
  }
}

TEST_CASE("save_idx round-trips byte-quantized data") {
  testutil::TempDir dir;
  LabeledDataset data;
  data.inputs = Tensor::matrix({{0.0, 128.0 / 255.0, 1.0}, {64.0 / 255.0, 0.0, 1.0}});
  data.labels = {0, 1};
  data.num_classes = 2;
  data.name = "quantized";

  const std::string images = dir.file("round-images.idx");
  const std::string labels = dir.file("round-labels.idx");
  save_idx(data, images, labels);
  const LabeledDataset back = load_idx(images, labels);
  CHECK(back.inputs == data.inputs);
  CHECK(back.labels == data.labels);
  CHECK(back.num_classes == 2);

  LabeledDataset out_of_range = data;
  out_of_range.inputs(0, 0) = 1.5;
  CHECK_THROWS_AS(save_idx(out_of_range, images, labels), std::invalid_argument);
}

TEST_CASE("composed test set keeps in-distribution first") {
  BlobSpec spec;
  spec.samples_per_class = 2;
  const LabeledDataset in_test = generate_blobs(spec);
  const LabeledDataset ood = generate_ood_ring(spec, 12.0);
  const ComposedTestSet composed = compose_test_set(in_test, ood);

  REQUIRE(composed.inputs.rows() == in_test.size() + ood.size());
  for (std::size_t i = 0; i < in_test.size(); ++i) {
    CHECK(composed.is_in_distribution[i] == 1);
    CHECK(composed.inputs(i, 0) == in_test.inputs(i, 0));
  }
  for (std::size_t i = 0; i < ood.size(); ++i) {
    CHECK(composed.is_in_distribution[in_test.size() + i] == 0);
    CHECK(composed.inputs(in_test.size() + i, 1) == ood.inputs(i, 1));
  }

  LabeledDataset mismatched = ood;
  mismatched.inputs = Tensor({4, 3});
  CHECK_THROWS_AS(compose_test_set(in_test, mismatched), std::invalid_argument);
}
