#pragma once

#include "contilearn/ensemble.hpp"

#include <Eigen/Dense>

namespace contilearn {

struct EigenDecomposition {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column i pairs with values[i]
};

/// Eigendecomposition of a symmetric matrix, eigenvalues in descending
/// order. Each eigenvector is signed so that its largest-magnitude entry is
/// positive (first such entry on ties). Throws std::invalid_argument if A is
/// not square or not symmetric within 1e-10 (relative to its largest entry).
EigenDecomposition eig_sym(const Eigen::MatrixXd& a);

/// Principal directions of a solution distribution: w = V0 + sum_a c_a U_a.
struct PrincipalComponents {
  Eigen::VectorXd v0;           // the weighted mean solution
  Eigen::MatrixXd u;            // k x m, orthonormal rows
  Eigen::VectorXd eigenvalues;  // the k selected, descending
  Eigen::VectorXd spectrum;     // full spectrum, descending

  Index k() const { return u.rows(); }
};

/// Keeps eigenvectors with eigenvalue >= rel_threshold * lambda_max, at
/// most k_max of them and at least one when lambda_max > 0. A zero
/// covariance yields k = 0.
PrincipalComponents select_components(const SolutionDistribution& dist,
                                      double rel_threshold, Index k_max);

}  // namespace contilearn
