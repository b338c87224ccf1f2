#pragma once

#include "contilearn/model.hpp"
#include "contilearn/solver.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace contilearn {

/// S bootstrap resamples (with replacement, size t_max) from a 64-bit seed.
struct BootstrapPlan {
  std::size_t replicates = 64;
  std::uint64_t seed = 0;
};

/// Sample indices drawn for one replicate, in draw order.
using IndexMultiset = std::vector<Index>;

/// Replicate s draws from its own generator seeded with seed ^ s, so every
/// multiset is independent of how many or which replicates are generated
/// first. Throws std::invalid_argument if S < 2 or t_max < 2.
std::vector<IndexMultiset> sample_plans(const BootstrapPlan& plan, Index t_max);

/// Multiplicity of each sample index in a multiset.
SampleCounts counts_of(const IndexMultiset& multiset, Index t_max);

struct ReplicateSolution {
  std::size_t replicate = 0;  // position in the plan list
  Eigen::VectorXd w;
  double full_log_likelihood = 0.0;
  double subset_log_likelihood = 0.0;
};

struct SolutionSet {
  std::vector<ReplicateSolution> solutions;
  Eigen::VectorXd weights;               // Prob(w_s), sums to 1
  std::vector<std::size_t> failed;       // replicates excluded after solver failure
};

/// Mean and covariance of the solution distribution.
struct SolutionDistribution {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// exp(L_s - logsumexp(L)). Entries far below the maximum underflow to 0.
Eigen::VectorXd solution_weights(std::span<const double> log_likelihoods);

/// Solves every replicate's subset objective starting from w_init (zero if
/// empty), evaluates each solution on the full design and weights the
/// solutions by their full-data likelihood. Replicates whose solve throws or
/// fails to converge are listed in `failed`; fewer than two survivors throws
/// NumericalError("ensemble", ...).
SolutionSet solve_replicates(const Design& design, std::span<const IndexMultiset> plans,
                             Prior prior, const SolverConfig& config,
                             const Eigen::VectorXd& w_init = {},
                             std::size_t workers = 1);

/// Weighted mean and covariance (symmetrized) of the solution set. Throws
/// NumericalError("ensemble", ...) when the weights are all zero.
SolutionDistribution fit_distribution(const SolutionSet& solutions);

}  // namespace contilearn
