#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rscsaga/loss.hpp"
#include "rscsaga/penalty.hpp"

namespace rscsaga {

enum class Algorithm { SAGA, ProxGD, ProxSVRG, ProxSAG, ProxSGD, RDA };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);
// SGD and RDA use decaying/growing schedules (eta0, beta0); the rest a constant step.
bool uses_constant_step(Algorithm algorithm);

enum class TableMode { FullVectors, Scalars };

enum class RunStatus { Converged, Budget, Diverged };
std::string_view to_string(RunStatus status);

struct TraceRecord {
  double pass;       // gradient evaluations / n
  double seconds;    // wall clock since start; 0 when timing is disabled
  double objective;  // G(theta)
};

struct SolverTrace {
  std::string algorithm;
  std::vector<std::pair<std::string, double>> hyperparameters;
  std::uint64_t seed = 0;
  std::vector<TraceRecord> records;
  RunStatus status = RunStatus::Budget;
  Vector theta;  // last iterate
};

/// Settings shared by SAGA and the baselines.
///
/// `step` is gamma for the constant-step methods, eta0 for Prox-SGD and beta0
/// for RDA. `passes` counts passes over the data (SAGA/SAG/SGD/RDA take
/// passes*n steps, Prox-GD takes `passes` iterations, SVRG runs
/// ceil(passes*n/(n+m)) epochs of one anchor pass plus m inner steps).
/// `trace_every` is in steps (iterations for Prox-GD); 0 means one record per
/// pass.
struct RunConfig {
  Vector theta0;  // empty: zeros
  double step = 0.0;
  std::size_t passes = 1;
  std::uint64_t seed = 0;
  std::size_t trace_every = 0;
  TableMode table_mode = TableMode::FullVectors;
  std::size_t svrg_inner_m = 0;  // 0: 2n
  bool record_time = true;
};

// G(theta) = f(theta) + lambda psi(theta) for convex penalties and
// f(theta) + g_{lambda,mu}(theta) for SCAD/MCP, where f is the original loss
// F(theta) + (penalty mu / 2)||theta||^2.
double objective(const LossModel& model, const Penalty& pen, const Vector& theta);

// The mu_shift a loss needs to be paired with `pen`: the penalty's mu plus
// gamma_w for the corrected quadratic loss.
double required_mu_shift(LossKind kind, double gamma_w, const Penalty& pen);

// Builds the loss with the shift matching `pen`.
LossModel make_model(LossKind kind, std::shared_ptr<const Dataset> data, const Penalty& pen,
                     double gamma_w = 0.0);

// Throws std::invalid_argument if model.mu_shift() does not match the penalty.
void check_pipeline(const LossModel& model, const Penalty& pen);

namespace detail {

// Records (pass, seconds, objective) and watches for divergence.
class TraceRecorder {
 public:
  TraceRecorder(const LossModel& model, const Penalty& pen, bool record_time, SolverTrace& trace);

  // Returns false once the run has diverged.
  bool record(double pass, const Vector& theta);

 private:
  const LossModel& model_;
  const Penalty& pen_;
  bool record_time_;
  SolverTrace& trace_;
  std::chrono::steady_clock::time_point start_;
  double limit_ = 0.0;
  bool have_limit_ = false;
};

Vector initial_point(const LossModel& model, const Penalty& pen, const RunConfig& cfg);
std::size_t trace_interval(const RunConfig& cfg, std::size_t n);

}  // namespace detail

}  // namespace rscsaga
