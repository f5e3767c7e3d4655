#include "oodlab/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oodlab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument("'" + text + "' is not a number");
  }
  if (consumed != text.size()) {
    throw std::invalid_argument("'" + text + "' is not a number");
  }
  return value;
}

long long parse_int(const std::string& text) {
  std::size_t consumed = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument("'" + text + "' is not an integer");
  }
  if (consumed != text.size()) {
    throw std::invalid_argument("'" + text + "' is not an integer");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (const std::string& item : split_list(text)) {
    values.push_back(static_cast<int>(parse_int(item)));
  }
  return values;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const std::string& item : split_list(text)) {
    values.push_back(parse_double(item));
  }
  return values;
}

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    const auto eq = stripped.find('=');
    const std::string where = origin + " line " + std::to_string(line_number);
    if (eq == std::string::npos) {
      throw std::invalid_argument(where + ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument(where + ": empty key");
    }
    if (!seen.insert(key).second) {
      throw std::invalid_argument(where + ": duplicate key '" + key + "'");
    }

    try {
      if (key == "run_id") {
        config.run_id = value;
      } else if (key == "dataset") {
        if (value == "blobs") {
          config.dataset = DatasetKind::blobs;
        } else if (value == "idx") {
          config.dataset = DatasetKind::idx;
        } else {
          throw std::invalid_argument("expected blobs or idx");
        }
      } else if (key == "blob_classes") {
        config.blob_classes = static_cast<int>(parse_int(value));
      } else if (key == "blob_dim") {
        config.blob_dim = static_cast<int>(parse_int(value));
      } else if (key == "blob_radius") {
        config.blob_radius = parse_double(value);
      } else if (key == "blob_sigma") {
        config.blob_sigma = parse_double(value);
      } else if (key == "blob_samples_per_class") {
        config.blob_samples_per_class = static_cast<int>(parse_int(value));
      } else if (key == "ood_ring_radius") {
        config.ood_ring_radius = parse_double(value);
      } else if (key == "idx_train_images") {
        config.idx_train_images = value;
      } else if (key == "idx_train_labels") {
        config.idx_train_labels = value;
      } else if (key == "idx_test_images") {
        config.idx_test_images = value;
      } else if (key == "idx_test_labels") {
        config.idx_test_labels = value;
      } else if (key == "idx_ood_images") {
        config.idx_ood_images = value;
      } else if (key == "idx_ood_labels") {
        config.idx_ood_labels = value;
      } else if (key == "hidden_layers") {
        config.hidden_layers.clear();
        for (int v : parse_int_list(value)) {
          if (v <= 0) throw std::invalid_argument("layer sizes must be positive");
          config.hidden_layers.push_back(static_cast<std::size_t>(v));
        }
      } else if (key == "head") {
        config.head = head_from_name(value);
      } else if (key == "entropic_scale") {
        config.entropic_scale = parse_double(value);
      } else if (key == "learning_rate") {
        config.sgd.learning_rate = parse_double(value);
      } else if (key == "momentum") {
        config.sgd.momentum = parse_double(value);
      } else if (key == "weight_decay") {
        config.sgd.weight_decay = parse_double(value);
      } else if (key == "decay_epochs") {
        config.sgd.decay_epochs = parse_int_list(value);
      } else if (key == "decay_factor") {
        config.sgd.decay_factor = parse_double(value);
      } else if (key == "epochs") {
        config.epochs = static_cast<int>(parse_int(value));
      } else if (key == "batch_size") {
        config.batch_size = static_cast<int>(parse_int(value));
      } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(parse_int(value));
      } else if (key == "output_dir") {
        config.output_dir = value;
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
  }
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open config");
  }
  return parse_config(in, path);
}

void validate(const ExperimentConfig& config) {
  if (config.epochs <= 0) {
    throw std::invalid_argument("epochs must be positive");
  }
  if (config.batch_size <= 0) {
    throw std::invalid_argument("batch_size must be positive");
  }
  if (config.head == HeadKind::isomax && !(config.entropic_scale > 0.0)) {
    throw std::invalid_argument("entropic_scale must be positive for the isomax head");
  }
  if (config.run_id.empty()) {
    throw std::invalid_argument("run_id must be non-empty");
  }
  validate(config.sgd);
  if (config.dataset == DatasetKind::blobs) {
    if (config.blob_classes <= 0 || config.blob_dim <= 0 || config.blob_samples_per_class <= 0) {
      throw std::invalid_argument("blob spec counts must be positive");
    }
  } else {
    const bool complete = !config.idx_train_images.empty() && !config.idx_train_labels.empty() &&
                          !config.idx_test_images.empty() && !config.idx_test_labels.empty() &&
                          !config.idx_ood_images.empty() && !config.idx_ood_labels.empty();
    if (!complete) {
      throw std::invalid_argument("dataset = idx requires all six idx_* paths");
    }
  }
}

}  // namespace oodlab
