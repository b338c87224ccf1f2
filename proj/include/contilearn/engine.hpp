#pragma once

#include "contilearn/data.hpp"
#include "contilearn/ensemble.hpp"
#include "contilearn/featuremap.hpp"
#include "contilearn/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace contilearn {

struct EngineConfig {
  int iterations = 1;
  BootstrapPlan bootstrap{64, 0};
  double rel_threshold = 0.05;
  Index k_max = 8;
  std::vector<double> prior_grid{0.01, 0.1, 1.0, 10.0};
  SolverConfig solver;
  bool algebra_check = false;
  double closure_epsilon = 0.0;  // stop once closure residual < epsilon; 0 disables
  std::size_t workers = 0;       // 0: worker_count()

  /// Throws std::invalid_argument on the first out-of-range field.
  void validate() const;
};

/// Metrics of the model on the feature space after `iteration` layers.
/// Record 0 is the plain logistic fit on the basic features; record i > 0
/// describes the cycle that built layer i from the solutions on space i-1.
struct IterationReport {
  int iteration = 0;
  Index input_dim = 0;     // dimension of the space the solutions lived in
  Index selected_k = 0;    // principal components kept
  Index feature_dim = 0;   // dimension of the new (expanded) space
  double prior_precision = 0.0;
  double oob_score = 0.0;
  double embedded_log_likelihood = 0.0;  // warm start on the new space
  double best_log_likelihood = 0.0;      // full-data optimum on the new space
  double training_accuracy = 0.0;
  std::size_t failed_replicates = 0;
  std::optional<double> closure_residual;
};

enum class StopReason { completed, degenerate, algebra_closed };

std::string to_string(StopReason reason);

struct EngineResult {
  RecursiveFeatureMap map;
  Eigen::VectorXd weights;  // full-data optimum on the final space
  double prior_precision = 0.0;
  std::vector<IterationReport> reports;
  StopReason stop = StopReason::completed;
  std::vector<std::string> warnings;
};

/// Mean per-sample log-likelihood on each replicate's out-of-bag samples,
/// averaged over replicates with a non-empty out-of-bag set. Replicates
/// whose solve fails are skipped. Throws NumericalError("engine", ...) when
/// no replicate contributes.
double oob_score(const Design& design, std::span<const IndexMultiset> plans, Prior prior,
                 const SolverConfig& config, const Eigen::VectorXd& w_init = {},
                 std::size_t workers = 1);

struct PriorChoice {
  double precision = 0.0;
  double score = 0.0;
  std::vector<double> scores;  // one per grid entry
};

/// Grid entry with the highest out-of-bag score (first on ties).
PriorChoice choose_prior(const Design& design, std::span<const IndexMultiset> plans,
                         std::span<const double> grid, const SolverConfig& config,
                         const Eigen::VectorXd& w_init = {}, std::size_t workers = 1);

/// Fraction of samples whose predicted class (P > 0.5) equals the label.
double accuracy(const Design& design, const Eigen::VectorXd& w);

/// Bootstrap seed for a given iteration; iteration 0 uses the base seed.
std::uint64_t iteration_seed(std::uint64_t seed, int iteration);

/// Runs the sample / solve / select / redefine / expand cycle.
EngineResult run(const Dataset& data, const EngineConfig& config);

}  // namespace contilearn
