#pragma once

// Comparison solvers sharing the loss/penalty machinery with SAGA:
// Prox-GD, Prox-SVRG, Prox-SAG, Prox-SGD and regularized dual averaging.

#include "rscsaga/saga.hpp"

namespace rscsaga {

// theta <- prox(theta - gamma grad F(theta), gamma lambda); one iteration = one pass.
SolverTrace prox_gd_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg);

// Epochs of: anchor refresh (full gradient, one pass) then m inner steps with
// direction grad F_j(theta) - grad F_j(anchor) + grad F(anchor).
// Anchor per-sample gradients come from cached GLM scalars, so an inner step
// costs one gradient evaluation.
SolverTrace prox_svrg_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg);

// SAGA table mechanics; direction is the table average after replacing entry j.
SolverTrace prox_sag_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg);

// theta <- prox(theta - eta_k grad F_j(theta), eta_k lambda), eta_k = eta0/sqrt(k).
SolverTrace prox_sgd_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg);

// theta^{k+1} = argmin <gbar_k, theta> + lambda psi(theta) + (beta_k/(2k))||theta||^2,
// beta_k = beta0 sqrt(k), gbar_k the running mean of sampled gradients.
SolverTrace rda_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg);

// Dispatch on the algorithm id.
SolverTrace run_solver(Algorithm algorithm, const LossModel& model, const Penalty& pen,
                       const RunConfig& cfg);

// eta0 / sqrt(k), k >= 1.
double sgd_step_size(double eta0, std::size_t k);
// beta0 * sqrt(k), k >= 1.
double rda_beta(double beta0, std::size_t k);

// Closed-form RDA minimiser: prox(-(k/beta_k) gbar, (k/beta_k) lambda).
Vector rda_iterate(const Penalty& pen, const Vector& gbar, std::size_t k, double beta_k);

// SVRG inner direction at theta for sample j.
Vector svrg_direction(const LossModel& model, std::size_t j, const Vector& theta,
                      const Vector& anchor, const Vector& anchor_gradient);

// Running mean of a vector stream.
class RunningMean {
 public:
  explicit RunningMean(Eigen::Index p) : mean_(Vector::Zero(p)) {}
  void add(const Vector& g) {
    ++count_;
    mean_ += (g - mean_) / static_cast<double>(count_);
  }
  const Vector& mean() const noexcept { return mean_; }
  std::size_t count() const noexcept { return count_; }

 private:
  Vector mean_;
  std::size_t count_ = 0;
};

}  // namespace rscsaga
