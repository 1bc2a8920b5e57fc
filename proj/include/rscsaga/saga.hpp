#pragma once

#include <random>

#include "rscsaga/solver_common.hpp"

namespace rscsaga {

/// Per-sample gradient memory with its running mean.
///
/// FullVectors keeps n gradients of length p. Scalars keeps the GLM derivative
/// g_i'(x_i^T phi_i) per sample (O(n) memory); the represented gradient is
/// that scalar times x_i, which is only the full gradient of F_i when the loss
/// carries no mu_shift.
class GradientTable {
 public:
  GradientTable(const LossModel& model, const Vector& theta0, TableMode mode);

  TableMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return n_; }
  const Vector& average() const noexcept { return average_; }

  // Represented gradient of sample i.
  Vector entry(std::size_t i) const;
  double scalar(std::size_t i) const { return scalars_[static_cast<Eigen::Index>(i)]; }

  // Mean of the stored entries computed from scratch.
  Vector recomputed_mean() const;
  void refresh_average() { average_ = recomputed_mean(); }

  // entry_i <- g_new (FullVectors) or scalar_i <- s_new (Scalars); the average
  // is updated incrementally by (new - old)/n.
  void replace_vector(std::size_t i, const Vector& g_new);
  void replace_scalar(std::size_t i, double s_new);

 private:
  const Dataset* data_;
  TableMode mode_;
  std::size_t n_;
  Matrix vectors_;
  Vector scalars_;
  Vector average_;
};

enum class TableEstimator {
  Saga,  // g_new - g_old + average (unbiased)
  Sag,   // average after replacing entry j (biased)
};

struct SagaOptions {
  double step = 0.0;
  std::uint64_t seed = 0;
  TableMode table_mode = TableMode::FullVectors;
  TableEstimator estimator = TableEstimator::Saga;
  // Keep phi_i (the point where entry i was last evaluated); needed by the
  // Lyapunov diagnostic, costs n*p doubles.
  bool retain_iterates = false;
};

/// SAGA iteration state: theta^k, the gradient table, gamma and the sampler.
class SagaSolver {
 public:
  // One full gradient pass at theta0 fills the table (phi_i^0 = theta0).
  SagaSolver(const LossModel& model, const Penalty& pen, Vector theta0, SagaOptions opts);

  // Draws j uniformly and performs one update.
  void step();
  // One update with a caller-chosen sample index.
  void step_with(std::size_t j);

  // The update direction for sample j at the current state, without mutating it.
  Vector direction(std::size_t j) const;

  const Vector& theta() const noexcept { return theta_; }
  const GradientTable& table() const noexcept { return table_; }
  std::size_t iteration() const noexcept { return iter_; }
  double step_size() const noexcept { return opts_.step; }
  // Effective passes consumed so far, including the initial table pass.
  double passes() const noexcept;
  TableMode table_mode() const noexcept { return table_.mode(); }

  bool retains_iterates() const noexcept { return opts_.retain_iterates; }
  // phi_i; requires retain_iterates.
  const Matrix& iterates() const;

 private:
  const LossModel& model_;
  const Penalty& pen_;
  SagaOptions opts_;
  Vector theta_;
  GradientTable table_;
  Matrix phi_;
  std::mt19937_64 rng_;
  std::uniform_int_distribution<std::size_t> pick_;
  std::size_t iter_ = 0;
  std::size_t since_refresh_ = 0;
  std::size_t evaluations_ = 0;
  Vector g_new_, w_;
};

// Theory default: 1/(9L) for convex penalties, 1/(24L) for SCAD/MCP.
double default_step(const LossModel& model, const Penalty& pen);

// Resolves the requested table mode: Scalars only when the loss has no shift.
TableMode effective_table_mode(const LossModel& model, TableMode requested);

// passes*n SAGA steps with a record every trace_every steps; deterministic in cfg.seed.
SolverTrace saga_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg);

namespace detail {
// Shared driver for SAGA and Prox-SAG.
SolverTrace run_table_method(const LossModel& model, const Penalty& pen, const RunConfig& cfg,
                             TableEstimator estimator);
}  // namespace detail

}  // namespace rscsaga
