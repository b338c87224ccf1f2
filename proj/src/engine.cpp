#include "contilearn/engine.hpp"

#include "contilearn/algebra.hpp"
#include "contilearn/errors.hpp"
#include "contilearn/parallel.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace contilearn {

void EngineConfig::validate() const {
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (bootstrap.replicates < 2) throw std::invalid_argument("replicates must be >= 2");
  if (!(rel_threshold > 0.0 && rel_threshold <= 1.0))
    throw std::invalid_argument("rel_threshold must lie in (0, 1]");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  if (prior_grid.empty()) throw std::invalid_argument("prior_grid must not be empty");
  for (double r : prior_grid)
    if (!(r > 0.0) || !std::isfinite(r))
      throw std::invalid_argument("prior_grid entries must be positive");
  if (!(closure_epsilon >= 0.0)) throw std::invalid_argument("closure_epsilon must be >= 0");
  solver.validate();
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::completed: return "completed";
    case StopReason::degenerate: return "degenerate";
    case StopReason::algebra_closed: return "algebra_closed";
  }
  return "unknown";
}

double oob_score(const Design& design, std::span<const IndexMultiset> plans, Prior prior,
                 const SolverConfig& config, const Eigen::VectorXd& w_init,
                 std::size_t workers) {
  const Index t_max = design.samples();
  const Eigen::VectorXd start =
      w_init.size() ? w_init : Eigen::VectorXd(Eigen::VectorXd::Zero(design.dim()));

  std::vector<std::optional<double>> per_replicate(plans.size());
  parallel_for(plans.size(), workers, [&](std::size_t s) {
    const SampleCounts counts = counts_of(plans[s], t_max);
    if ((counts.array() > 0.0).all()) return;
    Solution sol;
    try {
      sol = maximize(design, prior, config, start, counts);
    } catch (const NumericalError&) {
      return;
    }
    if (!sol.converged) return;
    const Eigen::VectorXd z = design.features * sol.w;
    double sum = 0.0;
    Index held_out = 0;
    for (Index t = 0; t < t_max; ++t) {
      if (counts[t] > 0.0) continue;
      sum += log_predict_prob(design.labels[t], z[t]);
      ++held_out;
    }
    per_replicate[s] = sum / static_cast<double>(held_out);
  });

  double total = 0.0;
  std::size_t used = 0;
  for (const auto& v : per_replicate) {
    if (!v) continue;
    total += *v;
    ++used;
  }
  if (used == 0) throw NumericalError("engine", "no replicate has an out-of-bag sample");
  return total / static_cast<double>(used);
}

PriorChoice choose_prior(const Design& design, std::span<const IndexMultiset> plans,
                         std::span<const double> grid, const SolverConfig& config,
                         const Eigen::VectorXd& w_init, std::size_t workers) {
  if (grid.empty()) throw std::invalid_argument("choose_prior: empty grid");
  PriorChoice choice;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double score = oob_score(design, plans, Prior{grid[i]}, config, w_init, workers);
    choice.scores.push_back(score);
    if (i == 0 || score > choice.score) {
      choice.score = score;
      choice.precision = grid[i];
    }
  }
  return choice;
}

double accuracy(const Design& design, const Eigen::VectorXd& w) {
  if (design.samples() == 0) return 0.0;
  Index correct = 0;
  for (Index t = 0; t < design.samples(); ++t) {
    const double p = predict_prob(w, design.features.row(t).transpose());
    const double predicted = p > 0.5 ? 1.0 : 0.0;
    correct += predicted == design.labels[t] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(design.samples());
}

std::uint64_t iteration_seed(std::uint64_t seed, int iteration) {
  return seed ^ (static_cast<std::uint64_t>(iteration) * 0x9E3779B97F4A7C15ULL);
}

EngineResult run(const Dataset& data, const EngineConfig& config) {
  config.validate();
  const std::size_t workers = config.workers ? config.workers : worker_count();

  EngineResult result;
  result.warnings = data.warnings;
  result.map.d = data.dim();
  result.map.standardization = data.standardization;

  Design design{result.map.feature_matrix(data.inputs), data.labels};
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(design.dim());
  IterationReport pending;
  pending.input_dim = design.dim();

  for (int iteration = 0;; ++iteration) {
    const auto plans = sample_plans(
        BootstrapPlan{config.bootstrap.replicates, iteration_seed(config.bootstrap.seed, iteration)},
        data.size());

    const PriorChoice choice =
        choose_prior(design, plans, config.prior_grid, config.solver, warm, workers);
    const Prior prior{choice.precision};
    const Solution best = maximize(design, prior, config.solver, warm);
    if (!best.converged) {
      result.warnings.push_back("iteration " + std::to_string(iteration) +
                                ": full-data solve stopped before reaching grad_tol");
    }

    IterationReport report = pending;
    report.iteration = iteration;
    report.feature_dim = design.dim();
    report.prior_precision = prior.precision;
    report.oob_score = choice.score;
    report.embedded_log_likelihood = log_likelihood(warm, design, prior);
    report.best_log_likelihood = best.log_likelihood;
    report.training_accuracy = accuracy(design, best.w);
    result.reports.push_back(report);
    result.weights = best.w;
    result.prior_precision = prior.precision;

    if (report.closure_residual && config.closure_epsilon > 0.0 &&
        *report.closure_residual < config.closure_epsilon) {
      result.stop = StopReason::algebra_closed;
      break;
    }
    if (iteration == config.iterations) break;

    const SolutionSet set =
        solve_replicates(design, plans, prior, config.solver, warm, workers);
    const SolutionDistribution dist = fit_distribution(set);
    const PrincipalComponents pc = select_components(dist, config.rel_threshold, config.k_max);
    if (pc.k() == 0) {
      result.stop = StopReason::degenerate;
      result.warnings.push_back("iteration " + std::to_string(iteration + 1) +
                                ": solution covariance is zero, stopping");
      break;
    }

    Layer layer{pc.v0, pc.u, {}};
    if (layer.degenerate()) {
      result.warnings.push_back("iteration " + std::to_string(iteration + 1) +
                                ": mean solution is zero, using constant bias super-feature");
    }
    Eigen::MatrixXd super(design.samples(), layer.super_dim());
    for (Index t = 0; t < design.samples(); ++t)
      super.row(t) = layer.super_features(design.features.row(t).transpose()).transpose();
    layer.scales = calibrate_scales(super);

    pending = IterationReport{};
    pending.input_dim = design.dim();
    pending.selected_k = pc.k();
    pending.failed_replicates = set.failed.size();
    if (config.algebra_check) pending.closure_residual = fit_structure_constants(super).closure_residual;

    Eigen::MatrixXd next(design.samples(), layer.output_dim());
    for (Index t = 0; t < design.samples(); ++t)
      next.row(t) = expand(super.row(t).transpose(), layer.scales).transpose();
    design.features = std::move(next);
    warm = embed_mean_solution(layer);
    result.map.layers.push_back(std::move(layer));
  }
  return result;
}

}  // namespace contilearn
