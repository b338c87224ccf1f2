#include "contilearn/model_io.hpp"

#include "contilearn/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace contilearn {

namespace {

void write_vector(std::ostream& out, std::string_view tag, const Eigen::VectorXd& v) {
  out << tag << ' ' << v.size();
  for (Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v[i]);
  out << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string> next(std::string_view expected_tag) {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of file, expected '" + std::string(expected_tag) + "'");
    ++line_no_;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (tokens.empty() || tokens.front() != expected_tag)
      fail("expected '" + std::string(expected_tag) + "'");
    return tokens;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("model file line " + std::to_string(line_no_) + ": " + what);
  }

  double number(const std::string& tok) const {
    double v = 0.0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) fail("bad number '" + tok + "'");
    return v;
  }

  long long integer(const std::string& tok) const {
    long long v = 0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || ptr != end) fail("bad integer '" + tok + "'");
    return v;
  }

  Eigen::VectorXd vector(std::string_view tag, Index expected = -1) {
    const auto tokens = next(tag);
    if (tokens.size() < 2) fail("missing length");
    const auto n = static_cast<Index>(integer(tokens[1]));
    if (n < 0 || static_cast<std::size_t>(n) + 2 != tokens.size()) fail("length mismatch");
    if (expected >= 0 && n != expected)
      fail("'" + std::string(tag) + "' has length " + std::to_string(n) + ", expected " +
           std::to_string(expected));
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = number(tokens[static_cast<std::size_t>(i) + 2]);
    return v;
  }

  std::string rest_of(const std::vector<std::string>& tokens, std::size_t from) const {
    std::string s;
    for (std::size_t i = from; i < tokens.size(); ++i) {
      if (i > from) s += ' ';
      s += tokens[i];
    }
    return s;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

ModelFile make_model_file(const EngineResult& result, const RunConfig& config) {
  ModelFile model;
  model.map = result.map;
  model.weights = result.weights;
  model.prior_precision = result.prior_precision;
  for (const auto& r : result.reports) model.iteration_priors.push_back(r.prior_precision);
  model.config = config;
  return model;
}

void write_model(std::ostream& out, const ModelFile& model) {
  out << "contilearn-model " << model.version << '\n';
  out << "d " << model.map.d << '\n';
  write_vector(out, "mean", model.map.standardization.mean);
  write_vector(out, "scale", model.map.standardization.scale);
  out << "layers " << model.map.layers.size() << '\n';
  for (const auto& layer : model.map.layers) {
    out << "layer " << layer.input_dim() << ' ' << layer.u.rows() << '\n';
    write_vector(out, "v0", layer.v0);
    for (Index a = 0; a < layer.u.rows(); ++a) write_vector(out, "u", layer.u.row(a).transpose());
    write_vector(out, "scales", layer.scales);
  }
  out << "prior " << format_double(model.prior_precision) << '\n';
  write_vector(out, "weights", model.weights);
  write_vector(out, "iteration_priors",
               Eigen::Map<const Eigen::VectorXd>(model.iteration_priors.data(),
                                                 static_cast<Index>(model.iteration_priors.size())));
  const auto entries = config_entries(model.config);
  out << "config " << entries.size() << '\n';
  for (const auto& [key, value] : entries) out << "set " << key << ' ' << value << '\n';
  out << "end\n";
}

std::string model_to_string(const ModelFile& model) {
  std::ostringstream out;
  write_model(out, model);
  return out.str();
}

ModelFile read_model(std::istream& in) {
  LineReader reader(in);
  ModelFile model;

  auto header = reader.next("contilearn-model");
  if (header.size() != 2) reader.fail("malformed header");
  model.version = static_cast<int>(reader.integer(header[1]));
  if (model.version != kModelFormatVersion)
    reader.fail("unsupported model format version " + header[1]);

  auto d_line = reader.next("d");
  if (d_line.size() != 2) reader.fail("malformed 'd'");
  model.map.d = static_cast<Index>(reader.integer(d_line[1]));
  if (model.map.d < 0) reader.fail("negative input dimension");
  model.map.standardization.mean = reader.vector("mean", model.map.d);
  model.map.standardization.scale = reader.vector("scale", model.map.d);
  if (!(model.map.standardization.scale.array() > 0.0).all())
    reader.fail("standardization scales must be positive");

  auto layers_line = reader.next("layers");
  if (layers_line.size() != 2) reader.fail("malformed 'layers'");
  const auto layer_count = reader.integer(layers_line[1]);
  if (layer_count < 0 || layer_count > 64) reader.fail("bad layer count");
  Index m = model.map.d + 1;
  for (long long i = 0; i < layer_count; ++i) {
    auto layer_line = reader.next("layer");
    if (layer_line.size() != 3) reader.fail("malformed 'layer'");
    const auto input_dim = static_cast<Index>(reader.integer(layer_line[1]));
    const auto k = static_cast<Index>(reader.integer(layer_line[2]));
    if (input_dim != m) reader.fail("layer input dimension breaks the dimension chain");
    if (k < 0 || k > input_dim) reader.fail("bad component count");
    Layer layer;
    layer.v0 = reader.vector("v0", input_dim);
    layer.u.resize(k, input_dim);
    for (Index a = 0; a < k; ++a) layer.u.row(a) = reader.vector("u", input_dim).transpose();
    layer.scales = reader.vector("scales", expanded_dim(k + 1));
    if (!(layer.scales.array() > 0.0).all()) reader.fail("scales must be positive");
    m = layer.output_dim();
    model.map.layers.push_back(std::move(layer));
  }

  auto prior_line = reader.next("prior");
  if (prior_line.size() != 2) reader.fail("malformed 'prior'");
  model.prior_precision = reader.number(prior_line[1]);
  model.weights = reader.vector("weights", m);
  const Eigen::VectorXd priors = reader.vector("iteration_priors");
  model.iteration_priors.assign(priors.data(), priors.data() + priors.size());

  auto config_line = reader.next("config");
  if (config_line.size() != 2) reader.fail("malformed 'config'");
  const auto entries = reader.integer(config_line[1]);
  std::string text;
  for (long long i = 0; i < entries; ++i) {
    auto set = reader.next("set");
    if (set.size() < 3) reader.fail("malformed 'set'");
    text += set[1] + " = " + reader.rest_of(set, 2) + "\n";
  }
  model.config = parse_run_config(text);
  reader.next("end");

  try {
    model.map.validate();
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("model file: ") + e.what());
  }
  return model;
}

ModelFile parse_model(const std::string& text) {
  std::istringstream in(text);
  return read_model(in);
}

void save_model(const std::filesystem::path& path, const ModelFile& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file '" + path.string() + "'");
  write_model(out, model);
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file '" + path.string() + "'");
  return read_model(in);
}

std::string format_report(const IterationReport& r) {
  std::ostringstream out;
  out << "iteration=" << r.iteration << " input_dim=" << r.input_dim << " k=" << r.selected_k
      << " feature_dim=" << r.feature_dim << " r=" << format_double(r.prior_precision)
      << " oob=" << format_double(r.oob_score)
      << " L_embedded=" << format_double(r.embedded_log_likelihood)
      << " L_best=" << format_double(r.best_log_likelihood)
      << " accuracy=" << format_double(r.training_accuracy)
      << " failed=" << r.failed_replicates
      << " closure=" << (r.closure_residual ? format_double(*r.closure_residual) : "na");
  return out.str();
}

}  // namespace contilearn
