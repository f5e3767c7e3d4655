// Command-line driver: config-driven training, checkpoint evaluation, the
// entropic-scale sweep, and CSV report merging.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oodlab/checkpoint.hpp"
#include "oodlab/experiment.hpp"

namespace {

using namespace oodlab;

// Trains one model, attaches detection rows for both scores, and writes the
// run directory.
int run_train(const std::string& config_path) {
  ExperimentConfig config = load_config(config_path);
  ExperimentData data = build_datasets(config);
  TrainOutput output = train(config, data);
  for (ScoreKind score : {ScoreKind::entropic, ScoreKind::mps}) {
    std::vector<DetectionRow> rows = evaluate(output.model, data.test, data.ood_sets, score);
    output.record.detections.insert(output.record.detections.end(), rows.begin(), rows.end());
  }
  const std::string run_dir = write_run_artifacts(output.model, output.record, config.output_dir);
  write_metrics_csv(std::cout, {&output.record, 1});
  std::cerr << "wrote " << run_dir << "\n";
  return 0;
}

int run_eval(const std::string& checkpoint_path, const std::string& config_path,
             const std::string& score_name_arg) {
  const ScoreKind score = score_from_name(score_name_arg);
  ExperimentConfig config = load_config(config_path);
  ExperimentData data = build_datasets(config);
  Model model = load_checkpoint(checkpoint_path);

  RunRecord record;
  record.run_id = config.run_id;
  record.head = head_kind(model.head);
  if (const auto* iso = std::get_if<IsoMaxHead>(&model.head)) {
    record.entropic_scale = iso->entropic_scale;
  }
  record.test_accuracy = accuracy(model, data.test);
  record.mean_inference_entropy = mean_entropy(inference_probabilities(model, data.test.inputs));
  record.detections = evaluate(model, data.test, data.ood_sets, score);
  write_metrics_csv(std::cout, {&record, 1});
  return 0;
}

int run_sweep(const std::string& config_path, const std::string& scales_arg) {
  const std::vector<double> scales = parse_double_list(scales_arg);
  ExperimentConfig config = load_config(config_path);
  config.head = HeadKind::isomax;
  ExperimentData data = build_datasets(config);

  std::vector<TrainOutput> outputs = sweep(config, scales, data);
  std::vector<RunRecord> records;
  for (TrainOutput& output : outputs) {
    write_run_artifacts(output.model, output.record, config.output_dir);
    records.push_back(output.record);
  }
  report(records, config.output_dir);
  write_metrics_csv(std::cout, records);
  std::cerr << "wrote " << config.output_dir << "/metrics.csv and curves.csv\n";
  return 0;
}

int run_report(const std::string& runs_dir) {
  merge_runs(runs_dir);
  std::cerr << "wrote " << runs_dir << "/metrics.csv and curves.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Out-of-distribution detection lab: train, evaluate, sweep, report"};
  app.require_subcommand(1);

  std::string config_path, checkpoint_path, score = "entropic";
  std::string scales = "1,3,10";
  std::string runs_dir;

  CLI::App* train_cmd = app.add_subcommand("train", "Train one model from a config file");
  train_cmd->add_option("--config", config_path, "key = value config file")->required();

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on the configured data");
  eval_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
  eval_cmd->add_option("--config", config_path, "config describing the datasets")->required();
  eval_cmd->add_option("--score", score, "detection score: entropic or mps");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Train a SoftMax baseline plus one IsoMax model per scale");
  sweep_cmd->add_option("--config", config_path, "key = value config file")->required();
  sweep_cmd->add_option("--scales", scales, "comma-separated entropic scales");

  CLI::App* report_cmd = app.add_subcommand("report", "Merge per-run CSVs under a directory");
  report_cmd->add_option("--runs", runs_dir, "directory containing run subdirectories")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return run_train(config_path);
    if (eval_cmd->parsed()) return run_eval(checkpoint_path, config_path, score);
    if (sweep_cmd->parsed()) return run_sweep(config_path, scales);
    return run_report(runs_dir);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
}
