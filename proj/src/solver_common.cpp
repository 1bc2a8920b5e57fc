#include "rscsaga/solver_common.hpp"

#include <cmath>
#include <limits>

namespace rscsaga {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::SAGA:
      return "saga";
    case Algorithm::ProxGD:
      return "prox-gd";
    case Algorithm::ProxSVRG:
      return "prox-svrg";
    case Algorithm::ProxSAG:
      return "prox-sag";
    case Algorithm::ProxSGD:
      return "prox-sgd";
    case Algorithm::RDA:
      return "rda";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::SAGA, Algorithm::ProxGD, Algorithm::ProxSVRG, Algorithm::ProxSAG,
                      Algorithm::ProxSGD, Algorithm::RDA}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

bool uses_constant_step(Algorithm algorithm) {
  return algorithm != Algorithm::ProxSGD && algorithm != Algorithm::RDA;
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged:
      return "converged";
    case RunStatus::Budget:
      return "budget";
    case RunStatus::Diverged:
      return "diverged";
  }
  return "?";
}

double objective(const LossModel& model, const Penalty& pen, const Vector& theta) {
  const double f = model.value(theta) + 0.5 * pen.mu() * theta.squaredNorm();
  if (pen.is_convex()) return f + pen.lambda() * pen.convex_value(theta);
  return f + pen.nonconvex_value(theta);
}

double required_mu_shift(LossKind kind, double gamma_w, const Penalty& pen) {
  return pen.mu() + (kind == LossKind::CorrectedQuadratic ? gamma_w : 0.0);
}

LossModel make_model(LossKind kind, std::shared_ptr<const Dataset> data, const Penalty& pen,
                     double gamma_w) {
  return LossModel(kind, std::move(data), gamma_w, required_mu_shift(kind, gamma_w, pen));
}

void check_pipeline(const LossModel& model, const Penalty& pen) {
  const double want = required_mu_shift(model.kind(), model.gamma_w(), pen);
  if (std::abs(model.mu_shift() - want) > 1e-15 * std::max(1.0, want)) {
    throw std::invalid_argument("loss mu_shift " + std::to_string(model.mu_shift()) +
                                " does not match the penalty (expected " + std::to_string(want) +
                                ")");
  }
  if (pen.kind() == PenaltyKind::GroupL2) {
    for (const auto& g : pen.groups())
      for (std::size_t j : g)
        if (j >= model.p()) throw std::invalid_argument("penalty group index exceeds dimension");
  }
}

namespace detail {

TraceRecorder::TraceRecorder(const LossModel& model, const Penalty& pen, bool record_time,
                             SolverTrace& trace)
    : model_(model),
      pen_(pen),
      record_time_(record_time),
      trace_(trace),
      start_(std::chrono::steady_clock::now()) {}

bool TraceRecorder::record(double pass, const Vector& theta) {
  double g = theta.allFinite() ? objective(model_, pen_, theta)
                               : std::numeric_limits<double>::infinity();
  if (!have_limit_) {
    // Divergence guard: 1e6 times the starting objective.
    limit_ = 1e6 * (g != 0.0 ? std::abs(g) : 1.0);
    have_limit_ = true;
  }
  const double seconds =
      record_time_
          ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count()
          : 0.0;
  if (!std::isfinite(g) || g > limit_) {
    trace_.status = RunStatus::Diverged;
    return false;
  }
  trace_.records.push_back({pass, seconds, g});
  return true;
}

Vector initial_point(const LossModel& model, const Penalty& pen, const RunConfig& cfg) {
  Vector theta = cfg.theta0.size() == 0 ? Vector::Zero(model.p()) : cfg.theta0;
  if (static_cast<std::size_t>(theta.size()) != model.p()) {
    throw std::invalid_argument("theta0 has the wrong dimension");
  }
  if (!theta.allFinite()) throw std::invalid_argument("theta0 is not finite");
  if (pen.convex_value(theta) > pen.rho() + 1e-8) throw std::invalid_argument("theta0 is infeasible");
  return theta;
}

std::size_t trace_interval(const RunConfig& cfg, std::size_t n) {
  return cfg.trace_every == 0 ? n : cfg.trace_every;
}

}  // namespace detail

}  // namespace rscsaga
