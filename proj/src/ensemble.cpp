#include "contilearn/ensemble.hpp"

#include "contilearn/errors.hpp"
#include "contilearn/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

namespace contilearn {

namespace {

// Unbiased draw from [0, n) by rejection; avoids the implementation-defined
// behavior of std::uniform_int_distribution so streams are portable.
Index draw_index(std::mt19937_64& rng, Index n) {
  const auto range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return static_cast<Index>(v % range);
}

}  // namespace

std::vector<IndexMultiset> sample_plans(const BootstrapPlan& plan, Index t_max) {
  if (plan.replicates < 2) throw std::invalid_argument("bootstrap needs at least 2 replicates");
  if (t_max < 2) throw std::invalid_argument("bootstrap needs at least 2 samples");

  std::vector<IndexMultiset> plans(plan.replicates);
  for (std::size_t s = 0; s < plan.replicates; ++s) {
    std::mt19937_64 rng(plan.seed ^ static_cast<std::uint64_t>(s));
    auto& indices = plans[s];
    indices.resize(static_cast<std::size_t>(t_max));
    for (auto& idx : indices) idx = draw_index(rng, t_max);
  }
  return plans;
}

SampleCounts counts_of(const IndexMultiset& multiset, Index t_max) {
  SampleCounts counts = SampleCounts::Zero(t_max);
  for (Index idx : multiset) counts[idx] += 1.0;
  return counts;
}

Eigen::VectorXd solution_weights(std::span<const double> log_likelihoods) {
  const auto n = static_cast<Index>(log_likelihoods.size());
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(n);
  if (n == 0) return weights;
  const double top = *std::max_element(log_likelihoods.begin(), log_likelihoods.end());
  double total = 0.0;
  for (Index s = 0; s < n; ++s) total += std::exp(log_likelihoods[static_cast<std::size_t>(s)] - top);
  const double log_norm = top + std::log(total);
  for (Index s = 0; s < n; ++s)
    weights[s] = std::exp(log_likelihoods[static_cast<std::size_t>(s)] - log_norm);
  return weights;
}

SolutionSet solve_replicates(const Design& design, std::span<const IndexMultiset> plans,
                             Prior prior, const SolverConfig& config,
                             const Eigen::VectorXd& w_init, std::size_t workers) {
  if (plans.empty()) throw std::invalid_argument("solve_replicates needs at least one plan");
  const Eigen::VectorXd start =
      w_init.size() ? w_init : Eigen::VectorXd(Eigen::VectorXd::Zero(design.dim()));

  std::vector<std::optional<ReplicateSolution>> slots(plans.size());
  parallel_for(plans.size(), workers, [&](std::size_t s) {
    const SampleCounts counts = counts_of(plans[s], design.samples());
    Solution sol;
    try {
      sol = maximize(design, prior, config, start, counts);
    } catch (const NumericalError&) {
      return;
    }
    if (!sol.converged) return;
    ReplicateSolution rep;
    rep.replicate = s;
    rep.full_log_likelihood = log_likelihood(sol.w, design, prior);
    rep.subset_log_likelihood = sol.log_likelihood;
    rep.w = std::move(sol.w);
    slots[s] = std::move(rep);
  });

  SolutionSet set;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (slots[s]) {
      set.solutions.push_back(std::move(*slots[s]));
    } else {
      set.failed.push_back(s);
    }
  }
  if (set.solutions.size() < 2) {
    throw NumericalError("ensemble", "only " + std::to_string(set.solutions.size()) +
                                         " bootstrap replicates converged");
  }
  std::vector<double> logl;
  logl.reserve(set.solutions.size());
  for (const auto& rep : set.solutions) logl.push_back(rep.full_log_likelihood);
  set.weights = solution_weights(logl);
  return set;
}

SolutionDistribution fit_distribution(const SolutionSet& solutions) {
  if (solutions.solutions.empty() ||
      static_cast<Index>(solutions.solutions.size()) != solutions.weights.size())
    throw std::invalid_argument("solution set and weights disagree");
  if (!(solutions.weights.sum() > 0.0))
    throw NumericalError("ensemble", "all solution weights are zero");

  const Index m = solutions.solutions.front().w.size();
  SolutionDistribution dist;
  dist.mean = Eigen::VectorXd::Zero(m);
  for (std::size_t s = 0; s < solutions.solutions.size(); ++s)
    dist.mean += solutions.weights[static_cast<Index>(s)] * solutions.solutions[s].w;

  dist.cov = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t s = 0; s < solutions.solutions.size(); ++s) {
    const Eigen::VectorXd dev = solutions.solutions[s].w - dist.mean;
    dist.cov.noalias() += solutions.weights[static_cast<Index>(s)] * dev * dev.transpose();
  }
  dist.cov = 0.5 * (dist.cov + dist.cov.transpose()).eval();
  return dist;
}

}  // namespace contilearn
