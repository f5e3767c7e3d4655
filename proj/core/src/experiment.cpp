#include "oodlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "oodlab/checkpoint.hpp"
#include "oodlab/optimizer.hpp"

namespace oodlab {

namespace fs = std::filesystem;

std::mt19937_64 purpose_rng(std::uint64_t seed, std::uint32_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    purpose};
  return std::mt19937_64(seq);
}

ExperimentData build_datasets(const ExperimentConfig& config) {
  validate(config);
  ExperimentData data;
  if (config.dataset == DatasetKind::blobs) {
    BlobSpec spec;
    spec.num_classes = config.blob_classes;
    spec.dim = config.blob_dim;
    spec.cluster_radius = config.blob_radius;
    spec.cluster_sigma = config.blob_sigma;
    spec.samples_per_class = config.blob_samples_per_class;
    spec.seed = config.seed;
    data.train = generate_blobs(spec);
    spec.seed = config.seed + 1;
    data.test = generate_blobs(spec);
    spec.seed = config.seed + 2;
    data.ood_sets.push_back(generate_ood_ring(spec, config.ood_ring_radius));
  } else {
    data.train = load_idx(config.idx_train_images, config.idx_train_labels);
    data.test = load_idx(config.idx_test_images, config.idx_test_labels);
    data.ood_sets.push_back(load_idx(config.idx_ood_images, config.idx_ood_labels));
    if (data.test.num_classes > data.train.num_classes) {
      throw std::invalid_argument("test set contains labels the training set never shows");
    }
    data.test.num_classes = data.train.num_classes;
  }
  if (data.train.dim() != data.test.dim()) {
    throw std::invalid_argument("train/test input dimensions differ");
  }
  for (const LabeledDataset& ood : data.ood_sets) {
    if (ood.dim() != data.train.dim()) {
      throw std::invalid_argument("OOD set dimension differs from the training data");
    }
  }
  return data;
}

namespace {

// Parameter tensors in a fixed update order, with per-parameter weight
// decay policy: weights and prototypes decay, biases never do.
struct Binding {
  Tensor* param = nullptr;
  bool decay = false;
};

std::vector<Binding> parameter_bindings(Model& model) {
  std::vector<Binding> bindings;
  for (DenseLayer& layer : model.extractor.layers()) {
    bindings.push_back({&layer.weights, true});
    bindings.push_back({&layer.bias, false});
  }
  if (auto* softmax = std::get_if<SoftMaxHead>(&model.head)) {
    bindings.push_back({&softmax->weights, true});
    bindings.push_back({&softmax->biases, false});
  } else {
    bindings.push_back({&std::get<IsoMaxHead>(model.head).prototypes, true});
  }
  return bindings;
}

EpochStats snapshot(int epoch, double train_loss, const Model& model, const ExperimentData& data) {
  EpochStats stats;
  stats.epoch = epoch;
  stats.train_loss = train_loss;
  stats.train_accuracy = accuracy(model, data.train);
  stats.test_accuracy = accuracy(model, data.test);
  stats.train_entropy = mean_entropy(training_probabilities(model, data.test.inputs));
  stats.inference_entropy = mean_entropy(inference_probabilities(model, data.test.inputs));
  return stats;
}

}  // namespace

TrainOutput train(const ExperimentConfig& config, const ExperimentData& data) {
  validate(config);
  if (data.train.size() == 0 || data.test.size() == 0) {
    throw std::invalid_argument("training requires non-empty train and test sets");
  }
  if (data.train.dim() != data.test.dim()) {
    throw std::invalid_argument("train/test input dimensions differ");
  }
  const auto started = std::chrono::steady_clock::now();

  std::mt19937_64 init_rng = purpose_rng(config.seed, 0);
  std::mt19937_64 shuffle_rng = purpose_rng(config.seed, 1);

  Model model;
  model.extractor = make_mlp(data.train.dim(), config.hidden_layers, init_rng);
  const auto num_classes = static_cast<std::size_t>(data.train.num_classes);
  if (config.head == HeadKind::softmax) {
    model.head = make_softmax_head(num_classes, model.extractor.feature_dim(), init_rng);
  } else {
    model.head = make_isomax_head(num_classes, model.extractor.feature_dim(),
                                  config.entropic_scale);
  }

  std::vector<Binding> bindings = parameter_bindings(model);
  std::vector<Tensor> velocities;
  velocities.reserve(bindings.size());
  for (const Binding& binding : bindings) {
    velocities.emplace_back(binding.param->shape());
  }

  RunRecord record;
  record.run_id = config.run_id;
  record.head = config.head;
  record.entropic_scale = config.head == HeadKind::isomax ? config.entropic_scale : 0.0;
  record.epochs.push_back(snapshot(0, 0.0, model, data));  // train_loss patched below

  const std::size_t n = data.train.size();
  const std::size_t dim = data.train.dim();
  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  bool first_batch = true;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    SgdConfig weight_cfg = config.sgd;
    weight_cfg.learning_rate = lr_at_epoch(config.sgd, epoch);
    SgdConfig bias_cfg = weight_cfg;
    bias_cfg.weight_decay = 0.0;

    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    int batch_index = 0;
    for (std::size_t start = 0; start < n; start += batch_size, ++batch_index) {
      const std::size_t b = std::min(batch_size, n - start);
      Tensor batch({b, dim});
      std::vector<int> targets(b);
      for (std::size_t i = 0; i < b; ++i) {
        const std::size_t row = order[start + i];
        for (std::size_t d = 0; d < dim; ++d) {
          batch(i, d) = data.train.inputs(row, d);
        }
        targets[i] = data.train.labels[row];
      }

      const std::string where = "run '" + config.run_id + "' epoch " +
                                std::to_string(epoch + 1) + " batch " +
                                std::to_string(batch_index);
      Tensor features;
      LossResult loss;
      try {
        features = model.extractor.forward(batch);
        loss = head_loss(model.head, features, targets);
      } catch (const std::invalid_argument& error) {
        // The data was validated up front, so this is numeric blow-up.
        throw std::runtime_error(where + ": " + error.what());
      }
      if (first_batch) {
        record.initial_loss = loss.loss;
        record.epochs[0].train_loss = loss.loss;
        first_batch = false;
      }
      if (!std::isfinite(loss.loss)) {
        throw std::runtime_error(where + ": training loss is non-finite");
      }

      ExtractorGradients grads = model.extractor.backward(loss.grad_features);
      std::vector<const Tensor*> gradients;
      gradients.reserve(bindings.size());
      for (std::size_t l = 0; l < grads.weights.size(); ++l) {
        gradients.push_back(&grads.weights[l]);
        gradients.push_back(&grads.bias[l]);
      }
      for (const Tensor& g : loss.grad_head_params) {
        gradients.push_back(&g);
      }
      try {
        for (std::size_t p = 0; p < bindings.size(); ++p) {
          sgd_step(*bindings[p].param, *gradients[p], velocities[p],
                   bindings[p].decay ? weight_cfg : bias_cfg);
        }
      } catch (const std::runtime_error& error) {
        throw std::runtime_error(where + ": " + error.what());
      }
      loss_sum += loss.loss * static_cast<double>(b);
    }
    try {
      record.epochs.push_back(snapshot(epoch + 1, loss_sum / static_cast<double>(n), model, data));
    } catch (const std::invalid_argument& error) {
      throw std::runtime_error("run '" + config.run_id + "' epoch " + std::to_string(epoch + 1) +
                               ": " + error.what());
    }
  }

  record.test_accuracy = record.epochs.back().test_accuracy;
  record.mean_inference_entropy = record.epochs.back().inference_entropy;
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {std::move(model), std::move(record)};
}

std::vector<DetectionRow> evaluate(const Model& model, const LabeledDataset& in_test,
                                   std::span<const LabeledDataset> ood_sets, ScoreKind score) {
  if (model.extractor.in_dim() != in_test.dim()) {
    throw std::invalid_argument("checkpoint input dimension does not match the test data");
  }
  std::vector<DetectionRow> rows;
  const Tensor in_probs = inference_probabilities(model, in_test.inputs);
  for (const LabeledDataset& ood : ood_sets) {
    if (ood.dim() != in_test.dim()) {
      throw std::invalid_argument("OOD set dimension differs from the test data");
    }
    const Tensor out_probs = inference_probabilities(model, ood.inputs);
    std::vector<ScoredSample> samples;
    samples.reserve(in_test.size() + ood.size());
    const std::size_t c = in_probs.cols();
    for (std::size_t i = 0; i < in_probs.rows(); ++i) {
      samples.push_back({sample_score(score, {in_probs.data() + i * c, c}), true});
    }
    for (std::size_t i = 0; i < out_probs.rows(); ++i) {
      samples.push_back({sample_score(score, {out_probs.data() + i * c, c}), false});
    }
    DetectionRow row;
    row.in_data = in_test.name;
    row.out_data = ood.name;
    row.score = score;
    row.report = detection_report(samples);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string scale_tag(double scale) {
  std::ostringstream out;
  out << scale;
  return out.str();
}

}  // namespace

std::vector<TrainOutput> sweep(const ExperimentConfig& base_config, std::span<const double> scales,
                               const ExperimentData& data) {
  if (base_config.head != HeadKind::isomax) {
    throw std::invalid_argument("sweep expects an isomax base config");
  }
  if (scales.empty()) {
    throw std::invalid_argument("sweep needs at least one entropic scale");
  }
  for (double scale : scales) {
    if (!(scale > 0.0)) {
      throw std::invalid_argument("entropic scales must be positive");
    }
  }

  std::vector<TrainOutput> outputs;
  outputs.reserve(scales.size() + 1);

  ExperimentConfig baseline = base_config;
  baseline.head = HeadKind::softmax;
  baseline.run_id = base_config.run_id + "-softmax";
  outputs.push_back(train(baseline, data));
  outputs.back().record.detections =
      evaluate(outputs.back().model, data.test, data.ood_sets, ScoreKind::mps);

  for (double scale : scales) {
    ExperimentConfig run_config = base_config;
    run_config.entropic_scale = scale;
    run_config.run_id = base_config.run_id + "-es" + scale_tag(scale);
    outputs.push_back(train(run_config, data));
    outputs.back().record.detections =
        evaluate(outputs.back().model, data.test, data.ood_sets, ScoreKind::entropic);
  }
  return outputs;
}

namespace {

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void open_for_writing(std::ofstream& out, const fs::path& path) {
  out.open(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open for writing");
  }
}

}  // namespace

void write_metrics_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << "run_id,head,entropic_scale,score,in_data,out_data,test_accuracy,mean_entropy,"
         "tnr_at_tpr95,auroc,dtacc\n";
  for (const RunRecord& record : records) {
    for (const DetectionRow& row : record.detections) {
      out << record.run_id << ',' << head_name(record.head) << ','
          << fmt9(record.entropic_scale) << ',' << score_name(row.score) << ',' << row.in_data
          << ',' << row.out_data << ',' << fmt9(record.test_accuracy) << ','
          << fmt9(record.mean_inference_entropy) << ',' << fmt9(row.report.tnr_at_tpr95) << ','
          << fmt9(row.report.auroc) << ',' << fmt9(row.report.dtacc) << '\n';
    }
  }
}

void write_curves_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << "run_id,epoch,train_loss,train_acc,test_acc,train_entropy,inference_entropy\n";
  for (const RunRecord& record : records) {
    for (const EpochStats& stats : record.epochs) {
      out << record.run_id << ',' << stats.epoch << ',' << fmt9(stats.train_loss) << ','
          << fmt9(stats.train_accuracy) << ',' << fmt9(stats.test_accuracy) << ','
          << fmt9(stats.train_entropy) << ',' << fmt9(stats.inference_entropy) << '\n';
    }
  }
}

void report(std::span<const RunRecord> records, const std::string& dir) {
  if (records.empty()) {
    throw std::invalid_argument("report needs at least one run record");
  }
  fs::create_directories(dir);
  std::ofstream metrics, curves;
  open_for_writing(metrics, fs::path(dir) / "metrics.csv");
  write_metrics_csv(metrics, records);
  open_for_writing(curves, fs::path(dir) / "curves.csv");
  write_curves_csv(curves, records);
  if (!metrics || !curves) {
    throw std::runtime_error(dir + ": writing CSV reports failed");
  }
}

std::string write_run_artifacts(const Model& model, const RunRecord& record,
                                const std::string& output_dir) {
  const fs::path run_dir = fs::path(output_dir) / record.run_id;
  fs::create_directories(run_dir);
  save_checkpoint(model, (run_dir / "checkpoint.txt").string());
  report({&record, 1}, run_dir.string());

  std::ofstream meta;
  open_for_writing(meta, run_dir / "run_meta.txt");
  char initial[32];
  std::snprintf(initial, sizeof initial, "%.17g", record.initial_loss);
  meta << "run_id " << record.run_id << "\n"
       << "head " << head_name(record.head) << "\n"
       << "entropic_scale " << fmt9(record.entropic_scale) << "\n"
       << "epochs " << (record.epochs.empty() ? 0 : record.epochs.back().epoch) << "\n"
       << "initial_train_loss " << initial << "\n"
       << "final_test_accuracy " << fmt9(record.test_accuracy) << "\n"
       << "wall_seconds " << fmt9(record.wall_seconds) << "\n";
  return run_dir.string();
}

namespace {

// Appends the data lines of one per-run CSV, skipping its header.
bool append_csv(const fs::path& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) {
    return false;
  }
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (!line.empty()) {
      out << line << '\n';
    }
  }
  return true;
}

}  // namespace

void merge_runs(const std::string& runs_dir) {
  if (!fs::is_directory(runs_dir)) {
    throw std::runtime_error(runs_dir + ": not a directory");
  }
  std::vector<fs::path> run_dirs;
  for (const auto& entry : fs::directory_iterator(runs_dir)) {
    if (entry.is_directory()) {
      run_dirs.push_back(entry.path());
    }
  }
  std::sort(run_dirs.begin(), run_dirs.end());

  std::ostringstream metrics, curves;
  metrics << "run_id,head,entropic_scale,score,in_data,out_data,test_accuracy,mean_entropy,"
             "tnr_at_tpr95,auroc,dtacc\n";
  curves << "run_id,epoch,train_loss,train_acc,test_acc,train_entropy,inference_entropy\n";
  std::size_t found = 0;
  for (const fs::path& run_dir : run_dirs) {
    const bool has_metrics = append_csv(run_dir / "metrics.csv", metrics);
    const bool has_curves = append_csv(run_dir / "curves.csv", curves);
    if (has_metrics || has_curves) {
      ++found;
    }
  }
  if (found == 0) {
    throw std::runtime_error(runs_dir + ": no run artifacts found");
  }
  std::ofstream metrics_out, curves_out;
  open_for_writing(metrics_out, fs::path(runs_dir) / "metrics.csv");
  metrics_out << metrics.str();
  open_for_writing(curves_out, fs::path(runs_dir) / "curves.csv");
  curves_out << curves.str();
}

}  // namespace oodlab
