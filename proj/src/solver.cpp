#include "contilearn/solver.hpp"

#include "contilearn/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace contilearn {

void SolverConfig::validate() const {
  if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw std::invalid_argument("backtracking factor must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 0.5))
    throw std::invalid_argument("Armijo constant must lie in (0, 0.5)");
}

Solution maximize(const Design& design, Prior prior, const SolverConfig& config,
                  const Eigen::VectorXd& w_init, const SampleCounts& counts) {
  prior.validate();
  config.validate();

  Solution sol;
  sol.w = w_init;
  sol.log_likelihood = log_likelihood(sol.w, design, prior, counts);
  if (!std::isfinite(sol.log_likelihood))
    throw NumericalError("solver", "log-likelihood at the initial point is not finite");

  Eigen::VectorXd g = gradient(sol.w, design, prior, counts);
  sol.grad_norm = g.norm();

  while (sol.grad_norm > config.grad_tol && sol.iterations < config.max_iters) {
    const Eigen::MatrixXd neg_h = -hessian(sol.w, design, prior, counts);
    const Eigen::LLT<Eigen::MatrixXd> llt(neg_h);
    if (llt.info() != Eigen::Success)
      throw NumericalError("solver", "negated Hessian is not positive definite");
    const Eigen::VectorXd step = llt.solve(g);
    const double slope = g.dot(step);
    ++sol.iterations;

    // Near the optimum the predicted gain falls below the rounding noise of
    // L, where the Armijo test degenerates into comparing equal numbers.
    // There the full Newton step is taken if it shrinks the gradient.
    if (slope <= 1e-13 * (1.0 + std::abs(sol.log_likelihood))) {
      Eigen::VectorXd trial = sol.w + step;
      Eigen::VectorXd trial_g = gradient(trial, design, prior, counts);
      if (!(trial_g.norm() < sol.grad_norm)) break;
      sol.w = std::move(trial);
      sol.log_likelihood = log_likelihood(sol.w, design, prior, counts);
      g = std::move(trial_g);
      sol.grad_norm = g.norm();
      continue;
    }

    double t = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial;
    double trial_l = 0.0;
    for (int k = 0; k < 60; ++k, t *= config.backtrack) {
      trial = sol.w + t * step;
      trial_l = log_likelihood(trial, design, prior, counts);
      if (std::isfinite(trial_l) && trial_l >= sol.log_likelihood + config.armijo * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    sol.w = std::move(trial);
    sol.log_likelihood = trial_l;
    g = gradient(sol.w, design, prior, counts);
    sol.grad_norm = g.norm();
  }
  sol.converged = sol.grad_norm <= config.grad_tol;
  return sol;
}

Solution maximize(const Design& design, Prior prior, const SolverConfig& config) {
  return maximize(design, prior, config, Eigen::VectorXd::Zero(design.dim()));
}

}  // namespace contilearn
