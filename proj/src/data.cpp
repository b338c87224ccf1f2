#include "contilearn/data.hpp"

#include "contilearn/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace contilearn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

struct RawTable {
  std::vector<std::vector<double>> rows;
};

RawTable read_table(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path.string() + "'");

  RawTable table;
  std::string line;
  bool header_pending = has_header;
  std::size_t row_number = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    ++row_number;
    std::vector<double> values;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      double v = 0.0;
      if (!parse_double(rest.substr(0, comma), v)) {
        throw DataError("row " + std::to_string(row_number) + " of '" +
                        path.string() + "': malformed numeric field");
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!table.rows.empty() && values.size() != table.rows.front().size()) {
      throw DataError("row " + std::to_string(row_number) + " of '" +
                      path.string() + "': expected " +
                      std::to_string(table.rows.front().size()) + " fields, got " +
                      std::to_string(values.size()));
    }
    table.rows.push_back(std::move(values));
  }
  if (table.rows.empty()) throw DataError("data file '" + path.string() + "' is empty");
  return table;
}

}  // namespace

Eigen::VectorXd Standardization::apply(const Eigen::VectorXd& raw) const {
  if (raw.size() != mean.size()) {
    throw DimensionError("standardization expects dimension " +
                         std::to_string(mean.size()) + ", got " +
                         std::to_string(raw.size()));
  }
  Eigen::VectorXd out(raw.size());
  for (Index i = 0; i < raw.size(); ++i) out[i] = (raw[i] - mean[i]) / scale[i];
  return out;
}

Standardization Standardization::fit(const Eigen::MatrixXd& raw) {
  Standardization s;
  const Index d = raw.cols();
  const double n = static_cast<double>(raw.rows());
  s.mean = Eigen::VectorXd::Zero(d);
  s.scale = Eigen::VectorXd::Ones(d);
  for (Index j = 0; j < d; ++j) {
    double sum = 0.0;
    for (Index t = 0; t < raw.rows(); ++t) sum += raw(t, j);
    const double mu = sum / n;
    double ss = 0.0;
    for (Index t = 0; t < raw.rows(); ++t) ss += (raw(t, j) - mu) * (raw(t, j) - mu);
    const double sd = std::sqrt(ss / n);
    s.mean[j] = mu;
    // Spread below rounding noise of the mean counts as constant.
    s.scale[j] = sd > 1e-12 * std::max(1.0, std::abs(mu)) ? sd : 1.0;
  }
  return s;
}

Dataset make_dataset(const Eigen::MatrixXd& raw_inputs, const Eigen::VectorXd& labels,
                     bool training) {
  if (raw_inputs.rows() != labels.size())
    throw DataError("input and label counts differ");
  if (raw_inputs.rows() == 0) throw DataError("dataset is empty");
  if (training && raw_inputs.rows() < 2)
    throw DataError("training requires at least 2 samples");
  if (!raw_inputs.allFinite()) throw DataError("inputs contain non-finite values");

  Dataset ds;
  Index ones = 0;
  for (Index t = 0; t < labels.size(); ++t) {
    if (labels[t] != 0.0 && labels[t] != 1.0) {
      throw DataError("row " + std::to_string(t + 1) + ": label must be 0 or 1");
    }
    ones += labels[t] == 1.0 ? 1 : 0;
  }
  if (training && (ones == 0 || ones == labels.size()))
    ds.warnings.push_back("training data contains a single class");

  ds.labels = labels;
  ds.standardization = Standardization::fit(raw_inputs);
  ds.inputs.resize(raw_inputs.rows(), raw_inputs.cols());
  for (Index t = 0; t < raw_inputs.rows(); ++t) {
    ds.inputs.row(t) = ds.standardization.apply(raw_inputs.row(t).transpose()).transpose();
  }
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, bool has_header, bool training) {
  const RawTable table = read_table(path, has_header);
  const Index cols = static_cast<Index>(table.rows.front().size());
  const Index n = static_cast<Index>(table.rows.size());
  Eigen::MatrixXd raw(n, cols - 1);
  Eigen::VectorXd labels(n);
  for (Index t = 0; t < n; ++t) {
    const auto& row = table.rows[static_cast<std::size_t>(t)];
    for (Index j = 0; j + 1 < cols; ++j) raw(t, j) = row[static_cast<std::size_t>(j)];
    labels[t] = row.back();
    if (labels[t] != 0.0 && labels[t] != 1.0) {
      throw DataError("row " + std::to_string(t + 1) + " of '" + path.string() +
                      "': label must be 0 or 1");
    }
  }
  return make_dataset(raw, labels, training);
}

Eigen::MatrixXd load_inputs_csv(const std::filesystem::path& path, bool has_header,
                                Index d) {
  const RawTable table = read_table(path, has_header);
  const auto cols = static_cast<Index>(table.rows.front().size());
  if (cols != d && cols != d + 1) {
    throw DataError("'" + path.string() + "' has " + std::to_string(cols) +
                    " columns, model expects " + std::to_string(d) + " inputs");
  }
  Eigen::MatrixXd raw(static_cast<Index>(table.rows.size()), d);
  for (Index t = 0; t < raw.rows(); ++t)
    for (Index j = 0; j < d; ++j)
      raw(t, j) = table.rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
  return raw;
}

Eigen::VectorXd basic_features(const Eigen::VectorXd& x, Index d) {
  if (x.size() != d) {
    throw DimensionError("basic_features expects dimension " + std::to_string(d) +
                         ", got " + std::to_string(x.size()));
  }
  Eigen::VectorXd f(d + 1);
  f[0] = 1.0;
  f.tail(d) = x;
  return f;
}

}  // namespace contilearn
