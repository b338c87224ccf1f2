// contilearn: train, predict and inspect recursive-feature logistic models.

#include "contilearn/algebra.hpp"
#include "contilearn/config.hpp"
#include "contilearn/data.hpp"
#include "contilearn/engine.hpp"
#include "contilearn/errors.hpp"
#include "contilearn/model_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace cl = contilearn;

namespace {

enum ExitCode : int { kOk = 0, kConfig = 1, kData = 2, kNumerical = 3 };

struct TrainArgs {
  std::string data;
  std::string config;
  std::string out;
  std::string report;
  std::optional<std::uint64_t> seed;
};

struct PredictArgs {
  std::string model;
  std::string data;
  std::string out;
  bool header = false;
};

struct AlgebraArgs {
  std::string model;
  std::string data;
  std::string out;
  std::string reference;
  bool header = false;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

int train(const TrainArgs& args) {
  cl::RunConfig config;
  try {
    config = cl::load_run_config(args.config);
    if (args.seed) config.engine.bootstrap.seed = *args.seed;
  } catch (const cl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
  const std::string data_path = args.data.empty() ? config.data_path : args.data;
  const std::string out_path = args.out.empty() ? config.out_path : args.out;
  if (data_path.empty() || out_path.empty()) {
    std::cerr << "config error: --data and --out are required\n";
    return kConfig;
  }

  cl::Dataset data;
  try {
    data = cl::load_csv(data_path, config.has_header);
  } catch (const cl::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  }

  cl::EngineResult result;
  try {
    result = cl::run(data, config.engine);
  } catch (const cl::NumericalError& e) {
    std::cerr << "numerical failure in " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure in engine: " << e.what() << '\n';
    return kNumerical;
  }
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

  std::ostringstream report;
  for (const auto& r : result.reports) report << cl::format_report(r) << '\n';
  report << "stop=" << cl::to_string(result.stop) << '\n';

  cl::save_model(out_path, cl::make_model_file(result, config));
  write_text(args.report.empty() ? out_path + ".report" : args.report, report.str());
  return kOk;
}

int predict(const PredictArgs& args) {
  cl::ModelFile model;
  try {
    model = cl::load_model(args.model);
  } catch (const cl::ConfigError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kConfig;
  }
  Eigen::MatrixXd raw;
  try {
    raw = cl::load_inputs_csv(args.data, args.header, model.map.d);
  } catch (const cl::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  }
  std::ostringstream out;
  for (Eigen::Index t = 0; t < raw.rows(); ++t) {
    const Eigen::VectorXd f = model.map.evaluate(raw.row(t).transpose());
    out << cl::format_double(cl::predict_prob(model.weights, f)) << '\n';
  }
  write_text(args.out, out.str());
  return kOk;
}

void write_constants(std::ostream& out, const cl::StructureConstants& c) {
  for (Eigen::Index a = 0; a < c.dim(); ++a)
    for (Eigen::Index b = 0; b < c.dim(); ++b) {
      out << "C " << a << ' ' << b;
      for (Eigen::Index g = 0; g < c.dim(); ++g) out << ' ' << cl::format_double(c(a, b, g));
      out << '\n';
    }
}

int algebra(const AlgebraArgs& args) {
  std::ostringstream out;
  if (!args.reference.empty()) {
    cl::ReferenceAlgebra ref{"", cl::StructureConstants(1), 0};
    try {
      ref = cl::reference_algebra(args.reference);
    } catch (const std::invalid_argument& e) {
      std::cerr << e.what() << '\n';
      return kConfig;
    }
    out << "algebra " << ref.name << '\n'
        << "n " << ref.constants.dim() << '\n'
        << "identity " << ref.identity << '\n'
        << "associativity_residual " << cl::format_double(cl::associativity_residual(ref.constants))
        << '\n';
    write_constants(out, ref.constants);
  } else {
    if (args.model.empty() || args.data.empty()) {
      std::cerr << "algebra needs --reference NAME or both --model and --data\n";
      return kConfig;
    }
    cl::ModelFile model;
    try {
      model = cl::load_model(args.model);
    } catch (const cl::ConfigError& e) {
      std::cerr << "model error: " << e.what() << '\n';
      return kConfig;
    }
    Eigen::MatrixXd raw;
    try {
      raw = cl::load_inputs_csv(args.data, args.header, model.map.d);
    } catch (const cl::DataError& e) {
      std::cerr << "data error: " << e.what() << '\n';
      return kData;
    }
    Eigen::MatrixXd standardized(raw.rows(), raw.cols());
    for (Eigen::Index t = 0; t < raw.rows(); ++t)
      standardized.row(t) = model.map.standardization.apply(raw.row(t).transpose()).transpose();
    const Eigen::MatrixXd samples = model.map.super_feature_matrix(standardized);
    cl::AlgebraFitReport fit;
    try {
      fit = cl::fit_structure_constants(samples);
    } catch (const std::invalid_argument& e) {
      std::cerr << "data error: " << e.what() << '\n';
      return kData;
    }
    out << "algebra fitted\n"
        << "n " << fit.constants.dim() << '\n'
        << "samples " << samples.rows() << '\n'
        << "closure_residual " << cl::format_double(fit.closure_residual) << '\n'
        << "associativity_residual " << cl::format_double(fit.associativity_residual) << '\n'
        << "ill_conditioned " << (fit.ill_conditioned ? "true" : "false") << '\n';
    write_constants(out, fit.constants);
  }
  if (args.out.empty()) {
    std::cout << out.str();
  } else {
    write_text(args.out, out.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursive nonlinear feature learning with bootstrap PCA"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Run the iteration cycle and save a model");
  train_cmd->add_option("--data", train_args.data, "Labelled CSV (label last)");
  train_cmd->add_option("--config", train_args.config, "key = value config file")->required();
  train_cmd->add_option("--out", train_args.out, "Model file to write");
  train_cmd->add_option("--report", train_args.report, "Report file (default: <out>.report)");
  train_cmd->add_option("--seed", train_args.seed, "Override the bootstrap seed");

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "Write P(y=1|x) for each input row");
  predict_cmd->add_option("--model", predict_args.model)->required();
  predict_cmd->add_option("--data", predict_args.data)->required();
  predict_cmd->add_option("--out", predict_args.out)->required();
  predict_cmd->add_flag("--header", predict_args.header, "Skip the first row");

  AlgebraArgs algebra_args;
  auto* algebra_cmd =
      app.add_subcommand("algebra", "Fit feature-algebra structure constants or check a reference");
  algebra_cmd->add_option("--model", algebra_args.model);
  algebra_cmd->add_option("--data", algebra_args.data);
  algebra_cmd->add_option("--out", algebra_args.out);
  algebra_cmd->add_option("--reference", algebra_args.reference, "complex or quaternion");
  algebra_cmd->add_flag("--header", algebra_args.header, "Skip the first row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*train_cmd) return train(train_args);
    if (*predict_cmd) return predict(predict_args);
    if (*algebra_cmd) return algebra(algebra_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
