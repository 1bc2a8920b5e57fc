#include "rscsaga/baselines.hpp"

#include <cmath>
#include <random>

namespace rscsaga {

namespace {

SolverTrace start_trace(Algorithm algorithm, const RunConfig& cfg, const char* hyper, double value) {
  if (cfg.passes < 1) throw std::invalid_argument("passes must be >= 1");
  if (!(cfg.step > 0.0) || !std::isfinite(cfg.step)) {
    throw std::invalid_argument(std::string(hyper) + " must be > 0");
  }
  SolverTrace trace;
  trace.algorithm = std::string(to_string(algorithm));
  trace.seed = cfg.seed;
  trace.hyperparameters = {{hyper, value}};
  return trace;
}

double passes_of(std::size_t evaluations, std::size_t n) {
  return static_cast<double>(evaluations) / static_cast<double>(n);
}

}  // namespace

double sgd_step_size(double eta0, std::size_t k) {
  if (k == 0) throw std::invalid_argument("step counter starts at 1");
  return eta0 / std::sqrt(static_cast<double>(k));
}

double rda_beta(double beta0, std::size_t k) {
  if (k == 0) throw std::invalid_argument("step counter starts at 1");
  return beta0 * std::sqrt(static_cast<double>(k));
}

Vector rda_iterate(const Penalty& pen, const Vector& gbar, std::size_t k, double beta_k) {
  // (beta_k/(2k))||theta + (k/beta_k) gbar||^2 + lambda psi(theta) up to a constant.
  const double scale = static_cast<double>(k) / beta_k;
  return pen.prox(-scale * gbar, scale * pen.lambda());
}

Vector svrg_direction(const LossModel& model, std::size_t j, const Vector& theta,
                      const Vector& anchor, const Vector& anchor_gradient) {
  return model.grad_sample(j, theta) - model.grad_sample(j, anchor) + anchor_gradient;
}

SolverTrace prox_gd_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg) {
  check_pipeline(model, pen);
  SolverTrace trace = start_trace(Algorithm::ProxGD, cfg, "step", cfg.step);
  Vector theta = detail::initial_point(model, pen, cfg);
  const double gamma = cfg.step;
  const std::size_t every = cfg.trace_every == 0 ? 1 : cfg.trace_every;

  detail::TraceRecorder recorder(model, pen, cfg.record_time, trace);
  trace.theta = theta;
  if (!recorder.record(0.0, theta)) return trace;
  Vector g;
  for (std::size_t it = 1; it <= cfg.passes; ++it) {
    model.grad_full_into(theta, g);
    try {
      theta = pen.prox(theta - gamma * g, gamma * pen.lambda());
    } catch (const std::domain_error&) {
      trace.status = RunStatus::Diverged;
      return trace;
    }
    if (it % every == 0 || it == cfg.passes) {
      trace.theta = theta;
      if (!recorder.record(static_cast<double>(it), theta)) return trace;
    }
  }
  return trace;
}

SolverTrace prox_svrg_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg) {
  check_pipeline(model, pen);
  SolverTrace trace = start_trace(Algorithm::ProxSVRG, cfg, "step", cfg.step);
  const std::size_t n = model.n();
  const std::size_t m = cfg.svrg_inner_m == 0 ? 2 * n : cfg.svrg_inner_m;
  trace.hyperparameters.emplace_back("inner_m", static_cast<double>(m));
  const std::size_t epochs = (cfg.passes * n + (n + m) - 1) / (n + m);
  const std::size_t every = detail::trace_interval(cfg, n);
  const double gamma = cfg.step;
  const double shift = model.mu_shift();

  Vector theta = detail::initial_point(model, pen, cfg);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  detail::TraceRecorder recorder(model, pen, cfg.record_time, trace);
  trace.theta = theta;
  if (!recorder.record(0.0, theta)) return trace;

  std::size_t evaluations = 0;
  std::size_t steps = 0;
  Vector anchor, anchor_grad, anchor_scalars(static_cast<Eigen::Index>(n)), g, w;
  for (std::size_t e = 0; e < epochs; ++e) {
    anchor = theta;
    model.grad_full_into(anchor, anchor_grad);
    for (std::size_t i = 0; i < n; ++i) anchor_scalars[static_cast<Eigen::Index>(i)] = model.scalar_residual(i, anchor);
    evaluations += n;
    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t j = pick(rng);
      model.grad_sample_into(j, theta, g);
      // grad F_j(anchor) = s_j x_j - shift * anchor
      g -= anchor_scalars[static_cast<Eigen::Index>(j)] * model.data().row(j).transpose();
      if (shift != 0.0) g += shift * anchor;
      g += anchor_grad;
      w = theta - gamma * g;
      try {
        theta = pen.prox(w, gamma * pen.lambda());
      } catch (const std::domain_error&) {
        trace.status = RunStatus::Diverged;
        return trace;
      }
      ++evaluations;
      if (++steps % every == 0) {
        trace.theta = theta;
        if (!recorder.record(passes_of(evaluations, n), theta)) return trace;
      }
    }
  }
  if (trace.records.back().pass != passes_of(evaluations, n)) {
    trace.theta = theta;
    recorder.record(passes_of(evaluations, n), theta);
  }
  return trace;
}

SolverTrace prox_sag_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg) {
  if (!(cfg.step > 0.0)) throw std::invalid_argument("step must be > 0");
  return detail::run_table_method(model, pen, cfg, TableEstimator::Sag);
}

SolverTrace prox_sgd_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg) {
  check_pipeline(model, pen);
  SolverTrace trace = start_trace(Algorithm::ProxSGD, cfg, "eta0", cfg.step);
  const std::size_t n = model.n();
  const std::size_t total = cfg.passes * n;
  const std::size_t every = detail::trace_interval(cfg, n);
  Vector theta = detail::initial_point(model, pen, cfg);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  detail::TraceRecorder recorder(model, pen, cfg.record_time, trace);
  trace.theta = theta;
  if (!recorder.record(0.0, theta)) return trace;
  Vector g;
  for (std::size_t k = 1; k <= total; ++k) {
    const std::size_t j = pick(rng);
    const double eta = sgd_step_size(cfg.step, k);
    model.grad_sample_into(j, theta, g);
    try {
      theta = pen.prox(theta - eta * g, eta * pen.lambda());
    } catch (const std::domain_error&) {
      trace.status = RunStatus::Diverged;
      return trace;
    }
    if (k % every == 0 || k == total) {
      trace.theta = theta;
      if (!recorder.record(passes_of(k, n), theta)) return trace;
    }
  }
  return trace;
}

SolverTrace rda_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg) {
  check_pipeline(model, pen);
  SolverTrace trace = start_trace(Algorithm::RDA, cfg, "beta0", cfg.step);
  const std::size_t n = model.n();
  const std::size_t total = cfg.passes * n;
  const std::size_t every = detail::trace_interval(cfg, n);
  Vector theta = detail::initial_point(model, pen, cfg);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  detail::TraceRecorder recorder(model, pen, cfg.record_time, trace);
  trace.theta = theta;
  if (!recorder.record(0.0, theta)) return trace;
  RunningMean gbar(theta.size());
  Vector g;
  for (std::size_t k = 1; k <= total; ++k) {
    const std::size_t j = pick(rng);
    model.grad_sample_into(j, theta, g);
    gbar.add(g);
    try {
      theta = rda_iterate(pen, gbar.mean(), k, rda_beta(cfg.step, k));
    } catch (const std::domain_error&) {
      trace.status = RunStatus::Diverged;
      return trace;
    }
    if (k % every == 0 || k == total) {
      trace.theta = theta;
      if (!recorder.record(passes_of(k, n), theta)) return trace;
    }
  }
  return trace;
}

SolverTrace run_solver(Algorithm algorithm, const LossModel& model, const Penalty& pen,
                       const RunConfig& cfg) {
  switch (algorithm) {
    case Algorithm::SAGA:
      return saga_run(model, pen, cfg);
    case Algorithm::ProxGD:
      return prox_gd_run(model, pen, cfg);
    case Algorithm::ProxSVRG:
      return prox_svrg_run(model, pen, cfg);
    case Algorithm::ProxSAG:
      return prox_sag_run(model, pen, cfg);
    case Algorithm::ProxSGD:
      return prox_sgd_run(model, pen, cfg);
    case Algorithm::RDA:
      return rda_run(model, pen, cfg);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace rscsaga
