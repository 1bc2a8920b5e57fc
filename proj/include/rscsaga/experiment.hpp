#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "rscsaga/baselines.hpp"
#include "rscsaga/config.hpp"
#include "rscsaga/diagnostics.hpp"

namespace rscsaga {

// Dataset, penalty and loss assembled from a config.
struct Problem {
  std::shared_ptr<const Dataset> data;
  Vector theta_star;  // empty for file data
  Penalty penalty;
  LossModel model;
};

Problem build_problem(const ExperimentConfig& cfg);

struct AlgorithmSummary {
  Algorithm algorithm;
  std::string hyperparameter;  // "step", "eta0" or "beta0"
  std::optional<double> chosen;  // unset when every grid value diverged
  std::vector<SolverTrace> traces;  // one per seed, in config order
};

struct ExperimentSummary {
  ReferenceResult reference;
  std::vector<AlgorithmSummary> algorithms;
  std::vector<std::filesystem::path> files;
  // True when some algorithm diverged at every grid value.
  bool any_failed = false;
};

// Tunes every algorithm on the first seed (smallest final gap, ties to the
// larger value), reruns all seeds at the chosen value, then writes
// <algorithm>_seed<seed>.csv per trace and summary.csv into cfg.output_dir.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, const ReferenceOptions& reference = {});

// Header "pass,seconds,objective[,gap]"; 17 significant digits; LF endings.
void emit_csv(const SolverTrace& trace, const std::filesystem::path& path,
              std::optional<double> g_hat = std::nullopt);

// Final gap of a trace, +inf when it diverged or is empty.
double final_gap(const SolverTrace& trace, double g_hat);

// Index of the best grid value: smallest finite final gap, ties to the larger value.
std::optional<std::size_t> select_best(const std::vector<double>& grid, const std::vector<double>& final_gaps);

}  // namespace rscsaga
