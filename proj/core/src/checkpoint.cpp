#include "oodlab/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oodlab {

namespace {

constexpr int kVersion = 1;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_tensor(std::ostream& out, const std::string& name, const Tensor& t) {
  out << "tensor " << name << " " << t.rank();
  for (std::size_t d : t.shape()) out << " " << d;
  out << "\n";
  const std::size_t row_len = t.rank() == 2 ? t.cols() : t.size();
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << fmt17(t(i)) << (i % row_len + 1 == row_len ? "\n" : " ");
  }
}

class Reader {
 public:
  Reader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  std::string next_line() {
    std::string line;
    if (!std::getline(in_, line)) {
      fail("unexpected end of file");
    }
    return line;
  }

  // Reads a line of the form "<keyword> <rest...>" and returns the rest.
  std::string expect(const std::string& keyword) {
    std::istringstream line(next_line());
    std::string word;
    line >> word;
    if (word != keyword) {
      fail("expected '" + keyword + "', found '" + word + "'");
    }
    std::string rest;
    std::getline(line, rest);
    return rest.empty() ? rest : rest.substr(1);
  }

  Tensor read_tensor(const std::string& expected_name) {
    std::istringstream header(next_line());
    std::string word, name;
    std::size_t rank = 0;
    header >> word >> name >> rank;
    if (word != "tensor" || name != expected_name || !header) {
      fail("expected tensor block '" + expected_name + "'");
    }
    std::vector<std::size_t> shape(rank);
    for (std::size_t& d : shape) {
      if (!(header >> d)) fail("tensor '" + expected_name + "': bad shape");
    }
    Tensor t(shape);
    std::size_t read_count = 0;
    while (read_count < t.size()) {
      std::istringstream row(next_line());
      double v;
      while (row >> v) {
        if (read_count >= t.size()) fail("tensor '" + expected_name + "': too many values");
        t(read_count++) = v;
      }
    }
    return t;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw std::runtime_error(path_ + ": " + message);
  }

 private:
  std::istream& in_;
  std::string path_;
};

}  // namespace

void save_checkpoint(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path + ": cannot open for writing");
  }
  out << "oodlab-checkpoint " << kVersion << "\n";
  out << "head " << head_name(head_kind(model.head)) << "\n";
  out << "num_classes " << head_num_classes(model.head) << "\n";
  if (const auto* iso = std::get_if<IsoMaxHead>(&model.head)) {
    out << "entropic_scale " << fmt17(iso->entropic_scale) << "\n";
  }
  out << "in_dim " << model.extractor.in_dim() << "\n";
  out << "feature_dim " << model.extractor.feature_dim() << "\n";
  const auto& layers = model.extractor.layers();
  out << "num_layers " << layers.size() << "\n";
  for (std::size_t l = 0; l < layers.size(); ++l) {
    out << "layer " << l << " " << activation_name(layers[l].activation) << " "
        << layers[l].in_dim() << " " << layers[l].out_dim() << "\n";
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string prefix = "layer" + std::to_string(l);
    write_tensor(out, prefix + ".weights", layers[l].weights);
    write_tensor(out, prefix + ".bias", layers[l].bias);
  }
  if (const auto* sm = std::get_if<SoftMaxHead>(&model.head)) {
    write_tensor(out, "head.weights", sm->weights);
    write_tensor(out, "head.biases", sm->biases);
  } else {
    write_tensor(out, "head.prototypes", std::get<IsoMaxHead>(model.head).prototypes);
  }
  if (!out) {
    throw std::runtime_error(path + ": write failed");
  }
}

Model load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open");
  }
  Reader reader(in, path);

  {
    std::istringstream header(reader.next_line());
    std::string word;
    int version = 0;
    header >> word >> version;
    if (word != "oodlab-checkpoint" || version != kVersion) {
      reader.fail("not a version " + std::to_string(kVersion) + " checkpoint");
    }
  }

  const HeadKind kind = head_from_name(reader.expect("head"));
  const std::size_t num_classes = std::stoull(reader.expect("num_classes"));
  double entropic_scale = 0.0;
  if (kind == HeadKind::isomax) {
    entropic_scale = std::stod(reader.expect("entropic_scale"));
  }
  const std::size_t in_dim = std::stoull(reader.expect("in_dim"));
  const std::size_t feature_dim = std::stoull(reader.expect("feature_dim"));
  const std::size_t num_layers = std::stoull(reader.expect("num_layers"));

  struct LayerSpec {
    Activation activation;
    std::size_t in, out;
  };
  std::vector<LayerSpec> specs;
  for (std::size_t l = 0; l < num_layers; ++l) {
    std::istringstream line(reader.next_line());
    std::string word, activation;
    std::size_t index, lin, lout;
    line >> word >> index >> activation >> lin >> lout;
    if (word != "layer" || index != l || !line) {
      reader.fail("bad layer descriptor at index " + std::to_string(l));
    }
    specs.push_back({activation_from_name(activation), lin, lout});
  }

  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l < num_layers; ++l) {
    const std::string prefix = "layer" + std::to_string(l);
    DenseLayer layer;
    layer.weights = reader.read_tensor(prefix + ".weights");
    layer.bias = reader.read_tensor(prefix + ".bias");
    layer.activation = specs[l].activation;
    if (layer.in_dim() != specs[l].in || layer.out_dim() != specs[l].out) {
      reader.fail("layer " + std::to_string(l) + " tensor shapes do not match its descriptor");
    }
    layers.push_back(std::move(layer));
  }

  Model model;
  model.extractor = FeatureExtractor(in_dim, std::move(layers));
  if (model.extractor.feature_dim() != feature_dim) {
    reader.fail("feature_dim does not match the layer stack");
  }

  if (kind == HeadKind::softmax) {
    SoftMaxHead head;
    head.weights = reader.read_tensor("head.weights");
    head.biases = reader.read_tensor("head.biases");
    if (head.num_classes() != num_classes || head.feature_dim() != feature_dim) {
      reader.fail("softmax head shapes do not match the header");
    }
    model.head = std::move(head);
  } else {
    IsoMaxHead head;
    head.prototypes = reader.read_tensor("head.prototypes");
    head.entropic_scale = entropic_scale;
    if (head.num_classes() != num_classes || head.feature_dim() != feature_dim) {
      reader.fail("isomax head shapes do not match the header");
    }
    if (!(entropic_scale > 0.0)) {
      reader.fail("entropic_scale must be positive");
    }
    model.head = std::move(head);
  }
  return model;
}

}  // namespace oodlab
