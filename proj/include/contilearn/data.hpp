#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace contilearn {

using Index = Eigen::Index;

/// Per-column affine transform recorded at load time and reused verbatim
/// when predicting, so train and predict standardize bit-identically.
struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  Index dim() const { return mean.size(); }

  /// (raw - mean) / scale, column by column.
  Eigen::VectorXd apply(const Eigen::VectorXd& raw) const;

  /// Population mean and standard deviation of each column. Constant
  /// columns get scale 1.
  static Standardization fit(const Eigen::MatrixXd& raw);
};

/// Binary-labelled samples with standardized inputs. Immutable after load.
struct Dataset {
  Eigen::MatrixXd inputs;  // t_max x d, standardized
  Eigen::VectorXd labels;  // 0 or 1
  Standardization standardization;
  std::vector<std::string> warnings;

  Index size() const { return inputs.rows(); }
  Index dim() const { return inputs.cols(); }
};

/// Builds a dataset from raw rows, validating labels and finiteness and
/// standardizing every column. In training mode at least two samples are
/// required and a single-class dataset is recorded as a warning.
Dataset make_dataset(const Eigen::MatrixXd& raw_inputs,
                     const Eigen::VectorXd& labels, bool training = true);

/// Reads a labelled CSV file (label in the last column).
Dataset load_csv(const std::filesystem::path& path, bool has_header,
                 bool training = true);

/// Reads raw input rows for prediction. Rows may carry d fields or d+1
/// (a trailing label column, ignored).
Eigen::MatrixXd load_inputs_csv(const std::filesystem::path& path,
                                bool has_header, Index d);

/// Feature vector with the bias feature 1 prepended: (1, x_1, ..., x_d).
Eigen::VectorXd basic_features(const Eigen::VectorXd& x, Index d);

}  // namespace contilearn
