#pragma once

#include <Eigen/Dense>

#include <optional>

namespace contilearn {

using Index = Eigen::Index;

/// Isotropic Gaussian prior on the parameter vector with precision r > 0.
struct Prior {
  double precision;

  /// Throws std::invalid_argument unless precision is finite and positive.
  void validate() const;
};

/// Labels and the feature matrix (one feature vector per row) the model is
/// fitted on. Optional per-sample multiplicities let bootstrap replicates
/// share one feature matrix; an empty vector means every sample counts once.
struct Design {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;

  Index samples() const { return features.rows(); }
  Index dim() const { return features.cols(); }
};

using SampleCounts = Eigen::VectorXd;

/// ln(1 + e^z) without overflow.
double softplus(double z);

/// P(y = 1 | w, F) = e^z / (1 + e^z), z = w.F. Clamped into the open
/// interval (0, 1) so saturated scores never produce an exact 0 or 1.
double predict_prob(const Eigen::VectorXd& w, const Eigen::VectorXd& features);

/// ln P(y | w, F) = y z - softplus(z); finite for any finite z.
double log_predict_prob(double label, double z);

/// (m/2) ln(r / 2pi) - (r/2) |w|^2, the log of the normalized prior density.
double log_prior(const Eigen::VectorXd& w, Prior prior);

/// L(w) = log_prior(w) + sum_t c_t [y_t z_t - softplus(z_t)]. Passing
/// std::nullopt for the prior evaluates the data term alone.
double log_likelihood(const Eigen::VectorXd& w, const Design& design,
                      std::optional<Prior> prior, const SampleCounts& counts = {});

/// -r w + sum_t c_t (y_t - p_t) F_t
Eigen::VectorXd gradient(const Eigen::VectorXd& w, const Design& design,
                         std::optional<Prior> prior, const SampleCounts& counts = {});

/// -r I - sum_t c_t p_t (1 - p_t) F_t F_t^T, symmetric negative definite
/// for r > 0.
Eigen::MatrixXd hessian(const Eigen::VectorXd& w, const Design& design,
                        std::optional<Prior> prior, const SampleCounts& counts = {});

}  // namespace contilearn
