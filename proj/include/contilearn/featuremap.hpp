#pragma once

#include "contilearn/data.hpp"
#include "contilearn/spectral.hpp"

#include <Eigen/Dense>

#include <vector>

namespace contilearn {

/// Flat positions of the quadratic expansion of m super-features: the m
/// linear terms first, then every pair (a, b) with a <= b in lexicographic
/// order.
class ExpandedIndex {
 public:
  struct Term {
    Index a;
    Index b;  // -1 for a linear term
    bool linear() const { return b < 0; }
  };

  explicit ExpandedIndex(Index m) : m_(m) {}

  Index m() const { return m_; }
  Index size() const { return m_ + m_ * (m_ + 1) / 2; }
  Index linear(Index a) const { return a; }
  Index pair(Index a, Index b) const;
  Term term(Index position) const;

 private:
  Index m_;
};

/// Output dimension of the expansion of m features, m + m(m+1)/2.
inline Index expanded_dim(Index m) { return ExpandedIndex(m).size(); }

/// (F_0, F_1..F_k): F_0 = V0.f / |V0| and F_a = U_a.f. A zero V0 has no
/// direction to normalize, so F_0 falls back to the constant feature 1.
Eigen::VectorXd redefine(const Eigen::VectorXd& v0, const Eigen::MatrixXd& u,
                         const Eigen::VectorXd& f);
Eigen::VectorXd redefine(const PrincipalComponents& pc, const Eigen::VectorXd& f);

/// Linear terms followed by pairwise products, each divided by its scale.
Eigen::VectorXd expand(const Eigen::VectorXd& features, const Eigen::VectorXd& scales);

/// Root-mean-square of every expanded feature over the rows of
/// `super_features` (one sample per row); identically-zero features get 1.
Eigen::VectorXd calibrate_scales(const Eigen::MatrixXd& super_features);

/// One redefine + expand step.
struct Layer {
  Eigen::VectorXd v0;      // m_in
  Eigen::MatrixXd u;       // k x m_in
  Eigen::VectorXd scales;  // expanded_dim(k + 1)

  Index input_dim() const { return v0.size(); }
  Index super_dim() const { return u.rows() + 1; }
  Index output_dim() const { return expanded_dim(super_dim()); }
  bool degenerate() const { return v0.norm() == 0.0; }

  Eigen::VectorXd super_features(const Eigen::VectorXd& f) const { return redefine(v0, u, f); }
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;

  /// Throws DimensionError on an inconsistent layer.
  void validate() const;
};

/// Parameter vector in the layer's output space reproducing the mean
/// solution's score: w.expand(redefine(f)) == v0.f for every f.
Eigen::VectorXd embed_mean_solution(const Layer& layer);

/// Composition of layers on top of the standardized basic features.
struct RecursiveFeatureMap {
  Index d = 0;
  Standardization standardization;
  std::vector<Layer> layers;

  Index output_dim() const;

  /// Features of a raw (unstandardized) input.
  Eigen::VectorXd evaluate(const Eigen::VectorXd& raw) const;
  /// Features of an already-standardized input.
  Eigen::VectorXd evaluate_standardized(const Eigen::VectorXd& x) const;
  /// Unexpanded super-features of the last layer (basic features when there
  /// are no layers).
  Eigen::VectorXd super_features_standardized(const Eigen::VectorXd& x) const;

  /// One feature row per standardized input row.
  Eigen::MatrixXd feature_matrix(const Eigen::MatrixXd& standardized_inputs) const;
  Eigen::MatrixXd super_feature_matrix(const Eigen::MatrixXd& standardized_inputs) const;

  /// Checks that the layer dimension chain is consistent.
  void validate() const;
};

}  // namespace contilearn
