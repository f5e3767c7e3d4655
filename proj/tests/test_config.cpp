#include <doctest.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "oodlab/config.hpp"
#include "temp_dir.hpp"

using namespace oodlab;

TEST_CASE("an empty config keeps all defaults") {
  std::istringstream in("");
  const ExperimentConfig config = parse_config(in);
  CHECK(config.run_id == "run");
  CHECK(config.dataset == DatasetKind::blobs);
  CHECK(config.blob_classes == 4);
  CHECK(config.head == HeadKind::isomax);
  CHECK(config.entropic_scale == 10.0);
  CHECK(config.epochs == 30);
  CHECK(config.batch_size == 64);
  CHECK(config.seed == 1);
  CHECK(config.sgd.learning_rate == 0.1);
  CHECK(config.sgd.momentum == 0.9);
  CHECK(config.sgd.weight_decay == 1e-4);
  CHECK(config.sgd.decay_epochs == std::vector<int>{15, 20, 25});
  CHECK(config.hidden_layers == std::vector<std::size_t>{32, 32});
  CHECK(config.output_dir == "runs");
}

TEST_CASE("all keys parse, with comments and blank lines ignored") {
  std::istringstream in(R"(# a full config
run_id = exp-7

dataset = blobs
blob_classes = 3
blob_dim = 2
blob_radius = 5.5
blob_sigma = 0.5
blob_samples_per_class = 10
ood_ring_radius = 20

hidden_layers = 16, 8
head = softmax
entropic_scale = 3
learning_rate = 0.05
momentum = 0.8
weight_decay = 0.001
decay_epochs = 2, 4
decay_factor = 5
epochs = 6
batch_size = 16
seed = 123
output_dir = scratch
)");
  const ExperimentConfig config = parse_config(in, "inline");
  CHECK(config.run_id == "exp-7");
  CHECK(config.blob_classes == 3);
  CHECK(config.blob_radius == 5.5);
  CHECK(config.blob_samples_per_class == 10);
  CHECK(config.ood_ring_radius == 20.0);
  CHECK(config.hidden_layers == std::vector<std::size_t>{16, 8});
  CHECK(config.head == HeadKind::softmax);
  CHECK(config.entropic_scale == 3.0);
  CHECK(config.sgd.learning_rate == 0.05);
  CHECK(config.sgd.momentum == 0.8);
  CHECK(config.sgd.decay_epochs == std::vector<int>{2, 4});
  CHECK(config.sgd.decay_factor == 5.0);
  CHECK(config.epochs == 6);
  CHECK(config.batch_size == 16);
  CHECK(config.seed == 123);
  CHECK(config.output_dir == "scratch");
}

TEST_CASE("parse errors carry the origin and line number") {
  SUBCASE("unknown key") {
    std::istringstream in("epochs = 3\nlerning_rate = 0.1\n");
    CHECK_THROWS_WITH_AS(parse_config(in, "cfg"), doctest::Contains("cfg line 2"),
                         std::invalid_argument);
  }
  SUBCASE("duplicate key") {
    std::istringstream in("epochs = 3\nepochs = 4\n");
    CHECK_THROWS_WITH_AS(parse_config(in), doctest::Contains("duplicate"),
                         std::invalid_argument);
  }
  SUBCASE("missing equals sign") {
    std::istringstream in("epochs 3\n");
    CHECK_THROWS_AS(parse_config(in), std::invalid_argument);
  }
  SUBCASE("malformed number") {
    std::istringstream in("entropic_scale = ten\n");
    CHECK_THROWS_WITH_AS(parse_config(in), doctest::Contains("not a number"),
                         std::invalid_argument);
  }
  SUBCASE("trailing junk after a number") {
    std::istringstream in("epochs = 3x\n");
    CHECK_THROWS_AS(parse_config(in), std::invalid_argument);
  }
  SUBCASE("bad dataset name") {
    std::istringstream in("dataset = svhn\n");
    CHECK_THROWS_AS(parse_config(in), std::invalid_argument);
  }
  SUBCASE("non-positive hidden layer") {
    std::istringstream in("hidden_layers = 16, 0\n");
    CHECK_THROWS_AS(parse_config(in), std::invalid_argument);
  }
}

TEST_CASE("validation enforces the documented invariants") {
  ExperimentConfig config;
  CHECK_NOTHROW(validate(config));

  SUBCASE("epochs") {
    config.epochs = 0;
    CHECK_THROWS_AS(validate(config), std::invalid_argument);
  }
  SUBCASE("batch size") {
    config.batch_size = -2;
    CHECK_THROWS_AS(validate(config), std::invalid_argument);
  }
  SUBCASE("entropic scale with isomax head") {
    config.entropic_scale = 0.0;
    CHECK_THROWS_AS(validate(config), std::invalid_argument);
    config.head = HeadKind::softmax;  // the softmax head ignores the scale
    CHECK_NOTHROW(validate(config));
  }
  SUBCASE("run id") {
    config.run_id.clear();
    CHECK_THROWS_AS(validate(config), std::invalid_argument);
  }
  SUBCASE("idx needs all six paths") {
    config.dataset = DatasetKind::idx;
    config.idx_train_images = "a";
    config.idx_train_labels = "b";
    config.idx_test_images = "c";
    config.idx_test_labels = "d";
    config.idx_ood_images = "e";
    CHECK_THROWS_AS(validate(config), std::invalid_argument);
    config.idx_ood_labels = "f";
    CHECK_NOTHROW(validate(config));
  }
}

TEST_CASE("load_config reads from disk and reports missing files") {
  testutil::TempDir dir;
  {
    std::ofstream out(dir.file("good.cfg"));
    out << "run_id = from-disk\nepochs = 2\n";
  }
  const ExperimentConfig config = load_config(dir.file("good.cfg"));
  CHECK(config.run_id == "from-disk");
  CHECK(config.epochs == 2);
  CHECK_THROWS_AS(load_config(dir.file("absent.cfg")), std::runtime_error);
}

TEST_CASE("list parsing") {
  CHECK(parse_int_list("1,2, 3") == std::vector<int>{1, 2, 3});
  CHECK(parse_int_list("") == std::vector<int>{});
  CHECK(parse_double_list("1, 3, 10") == std::vector<double>{1.0, 3.0, 10.0});
  CHECK(parse_double_list("0.5") == std::vector<double>{0.5});
  CHECK_THROWS_AS(parse_int_list("1,two"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double_list("1;2"), std::invalid_argument);
}
