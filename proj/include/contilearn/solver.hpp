#pragma once

#include "contilearn/model.hpp"

namespace contilearn {

struct SolverConfig {
  double grad_tol = 1e-8;
  int max_iters = 100;
  double backtrack = 0.5;  // step shrink factor
  double armijo = 1e-4;    // sufficient-increase constant

  void validate() const;
};

struct Solution {
  Eigen::VectorXd w;
  double log_likelihood = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Maximizes the regularized log-likelihood by damped Newton iteration.
/// Each step solves (-H) d = g with a Cholesky factorization and is
/// shortened by Armijo backtracking, so L never decreases. When max_iters
/// is exhausted the best iterate is returned with converged = false.
///
/// Throws NumericalError("solver", ...) if L(w_init) is not finite or the
/// negated Hessian fails to factor.
Solution maximize(const Design& design, Prior prior, const SolverConfig& config,
                  const Eigen::VectorXd& w_init, const SampleCounts& counts = {});

/// Same, starting from the zero vector.
Solution maximize(const Design& design, Prior prior, const SolverConfig& config = {});

}  // namespace contilearn
