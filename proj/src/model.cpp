#include "contilearn/model.hpp"

#include "contilearn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace contilearn {

namespace {

void check_design(const Eigen::VectorXd& w, const Design& design,
                  const SampleCounts& counts) {
  if (design.dim() != w.size()) {
    throw DimensionError("parameter dimension " + std::to_string(w.size()) +
                         " does not match feature dimension " +
                         std::to_string(design.dim()));
  }
  if (design.labels.size() != design.samples())
    throw DimensionError("label count does not match sample count");
  if (counts.size() != 0 && counts.size() != design.samples())
    throw DimensionError("sample count vector has wrong length");
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

void Prior::validate() const {
  if (!(precision > 0.0) || !std::isfinite(precision))
    throw std::invalid_argument("prior precision must be positive, got " +
                                std::to_string(precision));
}

double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double predict_prob(const Eigen::VectorXd& w, const Eigen::VectorXd& features) {
  if (w.size() != features.size()) {
    throw DimensionError("parameter dimension " + std::to_string(w.size()) +
                         " does not match feature dimension " +
                         std::to_string(features.size()));
  }
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  const double hi = std::nextafter(1.0, 0.0);
  return std::clamp(logistic(w.dot(features)), lo, hi);
}

double log_predict_prob(double label, double z) { return label * z - softplus(z); }

double log_prior(const Eigen::VectorXd& w, Prior prior) {
  prior.validate();
  const double m = static_cast<double>(w.size());
  const double r = prior.precision;
  return 0.5 * m * std::log(r / (2.0 * std::numbers::pi)) - 0.5 * r * w.squaredNorm();
}

double log_likelihood(const Eigen::VectorXd& w, const Design& design,
                      std::optional<Prior> prior, const SampleCounts& counts) {
  check_design(w, design, counts);
  const Eigen::VectorXd z = design.features * w;
  double sum = 0.0;
  for (Index t = 0; t < z.size(); ++t) {
    const double c = counts.size() ? counts[t] : 1.0;
    if (c == 0.0) continue;
    sum += c * log_predict_prob(design.labels[t], z[t]);
  }
  if (prior) sum += log_prior(w, *prior);
  return sum;
}

Eigen::VectorXd gradient(const Eigen::VectorXd& w, const Design& design,
                         std::optional<Prior> prior, const SampleCounts& counts) {
  check_design(w, design, counts);
  const Eigen::VectorXd z = design.features * w;
  Eigen::VectorXd residual(z.size());
  for (Index t = 0; t < z.size(); ++t) {
    const double c = counts.size() ? counts[t] : 1.0;
    residual[t] = c * (design.labels[t] - logistic(z[t]));
  }
  Eigen::VectorXd g = design.features.transpose() * residual;
  if (prior) {
    prior->validate();
    g -= prior->precision * w;
  }
  return g;
}

Eigen::MatrixXd hessian(const Eigen::VectorXd& w, const Design& design,
                        std::optional<Prior> prior, const SampleCounts& counts) {
  check_design(w, design, counts);
  const Eigen::VectorXd z = design.features * w;
  Eigen::VectorXd curvature(z.size());
  for (Index t = 0; t < z.size(); ++t) {
    const double c = counts.size() ? counts[t] : 1.0;
    const double p = logistic(z[t]);
    curvature[t] = c * p * (1.0 - p);
  }
  Eigen::MatrixXd h = -(design.features.transpose() * curvature.asDiagonal() *
                        design.features);
  if (prior) {
    prior->validate();
    h.diagonal().array() -= prior->precision;
  }
  // Exact symmetry regardless of summation order.
  return 0.5 * (h + h.transpose());
}

}  // namespace contilearn
