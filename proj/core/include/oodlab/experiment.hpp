#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "oodlab/config.hpp"
#include "oodlab/datasets.hpp"
#include "oodlab/metrics.hpp"
#include "oodlab/model.hpp"
#include "oodlab/scores.hpp"

namespace oodlab {

// Snapshot taken after each training epoch. Epoch 0 is the untrained model:
// its train_loss is the loss of the first minibatch before any update and
// the other fields describe the freshly initialized parameters.
struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double train_entropy = 0.0;      // training-path probabilities on the test set
  double inference_entropy = 0.0;  // inference-path probabilities on the test set
};

// One OOD detection result: which pair of datasets, which score, and the
// resulting metrics.
struct DetectionRow {
  std::string in_data;
  std::string out_data;
  ScoreKind score = ScoreKind::entropic;
  DetectionReport report;
};

// Everything a finished training run reports. wall_seconds is the only
// non-deterministic field and is kept out of the CSV files.
struct RunRecord {
  std::string run_id;
  HeadKind head = HeadKind::isomax;
  double entropic_scale = 0.0;  // 0 when head == softmax
  double initial_loss = 0.0;    // first minibatch, before the first update
  std::vector<EpochStats> epochs;
  double test_accuracy = 0.0;           // final epoch
  double mean_inference_entropy = 0.0;  // final epoch, in-distribution test set
  std::vector<DetectionRow> detections;
  double wall_seconds = 0.0;
};

struct TrainOutput {
  Model model;
  RunRecord record;
};

struct ExperimentData {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<LabeledDataset> ood_sets;
};

// Independent generator per (seed, purpose) pair so adding draws to one
// consumer never shifts another. Purposes: 0 = parameter init, 1 = batch
// shuffling.
std::mt19937_64 purpose_rng(std::uint64_t seed, std::uint32_t purpose);

// Materializes the configured datasets. Blobs: train uses config.seed, test
// seed + 1, the ring OOD set seed + 2. IDX: loads the three file pairs.
ExperimentData build_datasets(const ExperimentConfig& config);

// SGD training of a fresh model on data.train. Deterministic given the
// config. Weight decay applies to weights and prototypes but to no bias.
// Throws std::runtime_error with an epoch/batch diagnostic if the loss
// turns non-finite. The returned record has no detections attached yet.
TrainOutput train(const ExperimentConfig& config, const ExperimentData& data);

// Scores the in-distribution test set against each OOD set with one score
// function. rows[i] corresponds to ood_sets[i].
std::vector<DetectionRow> evaluate(const Model& model, const LabeledDataset& in_test,
                                   std::span<const LabeledDataset> ood_sets, ScoreKind score);

// Trains one SoftMax baseline plus one IsoMax model per entropic scale, all
// sharing the seed, data and schedule so only the head differs. Detections
// use the head's own score: mps for the baseline, entropic for IsoMax.
// Returns |scales| + 1 outputs, baseline first.
std::vector<TrainOutput> sweep(const ExperimentConfig& base_config, std::span<const double> scales,
                               const ExperimentData& data);

// CSV emission. Floats are written with 9 significant digits; re-parsing
// and re-writing a file reproduces it byte for byte.
void write_metrics_csv(std::ostream& out, std::span<const RunRecord> records);
void write_curves_csv(std::ostream& out, std::span<const RunRecord> records);

// Writes metrics.csv and curves.csv for the records into `dir` (created if
// needed). Throws std::invalid_argument on an empty record list.
void report(std::span<const RunRecord> records, const std::string& dir);

// Writes <output_dir>/<run_id>/{checkpoint.txt, metrics.csv, curves.csv,
// run_meta.txt} and returns that run directory.
std::string write_run_artifacts(const Model& model, const RunRecord& record,
                                const std::string& output_dir);

// Concatenates the per-run metrics.csv/curves.csv found in the immediate
// subdirectories of runs_dir (sorted by name) into <runs_dir>/metrics.csv
// and <runs_dir>/curves.csv. Throws std::runtime_error if no run artifacts
// are found.
void merge_runs(const std::string& runs_dir);

}  // namespace oodlab
