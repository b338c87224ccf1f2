#pragma once

#include "contilearn/config.hpp"
#include "contilearn/engine.hpp"
#include "contilearn/featuremap.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace contilearn {

inline constexpr int kModelFormatVersion = 1;

/// Everything needed to reproduce predictions, plus a record of how the
/// model was trained.
struct ModelFile {
  int version = kModelFormatVersion;
  RecursiveFeatureMap map;
  Eigen::VectorXd weights;
  double prior_precision = 0.0;
  std::vector<double> iteration_priors;  // chosen r per report record
  RunConfig config;
};

ModelFile make_model_file(const EngineResult& result, const RunConfig& config);

/// Line-oriented text. Numbers use 17 significant digits, so
/// save -> load -> save reproduces the file byte for byte.
void write_model(std::ostream& out, const ModelFile& model);
std::string model_to_string(const ModelFile& model);

/// Throws ConfigError on an unknown version, a malformed line or an
/// inconsistent dimension chain.
ModelFile read_model(std::istream& in);
ModelFile parse_model(const std::string& text);

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

/// One record per line, fixed field order:
/// iteration= input_dim= k= feature_dim= r= oob= L_embedded= L_best=
/// accuracy= failed= closure=
std::string format_report(const IterationReport& report);

}  // namespace contilearn
