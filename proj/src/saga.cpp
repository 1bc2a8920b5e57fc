#include "rscsaga/saga.hpp"

#include <cmath>

namespace rscsaga {

namespace {

// Average refreshed from scratch after this many steps per sample.
constexpr std::size_t kRefreshPasses = 100;

}  // namespace

GradientTable::GradientTable(const LossModel& model, const Vector& theta0, TableMode mode)
    : data_(&model.data()), mode_(mode), n_(model.n()) {
  if (mode_ == TableMode::Scalars && model.mu_shift() != 0.0) {
    throw std::invalid_argument("scalar gradient table requires mu_shift = 0");
  }
  const auto n = static_cast<Eigen::Index>(n_);
  if (mode_ == TableMode::Scalars) {
    scalars_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) scalars_[i] = model.scalar_residual(static_cast<std::size_t>(i), theta0);
  } else {
    vectors_.resize(n, static_cast<Eigen::Index>(model.p()));
    Vector g;
    for (Eigen::Index i = 0; i < n; ++i) {
      model.grad_sample_into(static_cast<std::size_t>(i), theta0, g);
      vectors_.row(i) = g.transpose();
    }
  }
  refresh_average();
}

Vector GradientTable::entry(std::size_t i) const {
  const auto r = static_cast<Eigen::Index>(i);
  if (mode_ == TableMode::Scalars) return scalars_[r] * data_->row(i).transpose();
  return vectors_.row(r).transpose();
}

Vector GradientTable::recomputed_mean() const {
  if (mode_ == TableMode::Scalars) {
    return data_->features().transpose() * scalars_ / static_cast<double>(n_);
  }
  Vector sum = Vector::Zero(vectors_.cols());
  for (Eigen::Index i = 0; i < vectors_.rows(); ++i) sum += vectors_.row(i).transpose();
  return sum / static_cast<double>(n_);
}

void GradientTable::replace_vector(std::size_t i, const Vector& g_new) {
  const auto r = static_cast<Eigen::Index>(i);
  if (n_ == 1) {
    // A single entry is its own mean.
    average_ = g_new;
  } else {
    average_ += (g_new - vectors_.row(r).transpose()) / static_cast<double>(n_);
  }
  vectors_.row(r) = g_new.transpose();
}

void GradientTable::replace_scalar(std::size_t i, double s_new) {
  const auto r = static_cast<Eigen::Index>(i);
  if (n_ == 1) {
    average_ = s_new * data_->row(i).transpose();
  } else {
    average_ += ((s_new - scalars_[r]) / static_cast<double>(n_)) * data_->row(i).transpose();
  }
  scalars_[r] = s_new;
}

double default_step(const LossModel& model, const Penalty& pen) {
  const double L = model.smoothness_bound();
  return pen.is_convex() ? 1.0 / (9.0 * L) : 1.0 / (24.0 * L);
}

TableMode effective_table_mode(const LossModel& model, TableMode requested) {
  return model.mu_shift() == 0.0 ? requested : TableMode::FullVectors;
}

SagaSolver::SagaSolver(const LossModel& model, const Penalty& pen, Vector theta0, SagaOptions opts)
    : model_(model),
      pen_(pen),
      opts_(opts),
      theta_(std::move(theta0)),
      table_((check_pipeline(model, pen), model), theta_, opts.table_mode),
      rng_(opts.seed),
      pick_(0, model.n() - 1) {
  if (!(opts_.step > 0.0) || !std::isfinite(opts_.step)) {
    throw std::invalid_argument("step must be > 0");
  }
  if (static_cast<std::size_t>(theta_.size()) != model.p() || !theta_.allFinite()) {
    throw std::invalid_argument("theta0 has the wrong dimension or is not finite");
  }
  if (pen.convex_value(theta_) > pen.rho() + 1e-8) throw std::invalid_argument("theta0 is infeasible");
  if (opts_.retain_iterates) phi_ = theta_.transpose().replicate(static_cast<Eigen::Index>(model.n()), 1);
  evaluations_ = model.n();
}

double SagaSolver::passes() const noexcept {
  return static_cast<double>(evaluations_) / static_cast<double>(model_.n());
}

const Matrix& SagaSolver::iterates() const {
  if (!opts_.retain_iterates) throw std::logic_error("solver was built without retain_iterates");
  return phi_;
}

Vector SagaSolver::direction(std::size_t j) const {
  if (j >= model_.n()) throw std::out_of_range("sample index out of range");
  const double n = static_cast<double>(model_.n());
  if (table_.mode() == TableMode::Scalars) {
    const double s_new = model_.scalar_residual(j, theta_);
    const Vector x = model_.data().row(j).transpose();
    if (opts_.estimator == TableEstimator::Sag) {
      return table_.average() + ((s_new - table_.scalar(j)) / n) * x;
    }
    return s_new * x + (table_.average() - table_.scalar(j) * x);
  }
  const Vector g_new = model_.grad_sample(j, theta_);
  const Vector g_old = table_.entry(j);
  if (opts_.estimator == TableEstimator::Sag) return table_.average() + (g_new - g_old) / n;
  return g_new + (table_.average() - g_old);
}

void SagaSolver::step() { step_with(pick_(rng_)); }

void SagaSolver::step_with(std::size_t j) {
  if (j >= model_.n()) throw std::out_of_range("sample index out of range");
  const double gamma = opts_.step;
  const auto row = static_cast<Eigen::Index>(j);
  const bool sag = opts_.estimator == TableEstimator::Sag;

  // g_old and the average are read before the table changes.
  if (table_.mode() == TableMode::Scalars) {
    const double s_new = model_.scalar_residual(j, theta_);
    const double s_old = table_.scalar(j);
    const auto x = model_.data().row(j).transpose();
    if (sag) {
      table_.replace_scalar(j, s_new);
      w_ = theta_ - gamma * table_.average();
    } else {
      w_ = theta_ - gamma * (s_new * x + (table_.average() - s_old * x));
      table_.replace_scalar(j, s_new);
    }
  } else {
    model_.grad_sample_into(j, theta_, g_new_);
    if (sag) {
      table_.replace_vector(j, g_new_);
      w_ = theta_ - gamma * table_.average();
    } else {
      w_ = theta_ - gamma * (g_new_ + (table_.average() - table_.entry(j)));
      table_.replace_vector(j, g_new_);
    }
  }
  if (opts_.retain_iterates) phi_.row(row) = theta_.transpose();

  theta_ = pen_.prox(w_, gamma * pen_.lambda());
  ++iter_;
  ++evaluations_;
  if (++since_refresh_ >= kRefreshPasses * model_.n()) {
    table_.refresh_average();
    since_refresh_ = 0;
  }
}

namespace detail {

SolverTrace run_table_method(const LossModel& model, const Penalty& pen, const RunConfig& cfg,
                             TableEstimator estimator) {
  if (cfg.passes < 1) throw std::invalid_argument("passes must be >= 1");
  SolverTrace trace;
  trace.algorithm = std::string(
      to_string(estimator == TableEstimator::Saga ? Algorithm::SAGA : Algorithm::ProxSAG));
  trace.seed = cfg.seed;
  const double step = cfg.step > 0.0 ? cfg.step : default_step(model, pen);
  trace.hyperparameters = {{"step", step}};

  SagaOptions opts;
  opts.step = step;
  opts.seed = cfg.seed;
  opts.table_mode = effective_table_mode(model, cfg.table_mode);
  opts.estimator = estimator;
  SagaSolver solver(model, pen, detail::initial_point(model, pen, cfg), opts);

  TraceRecorder recorder(model, pen, cfg.record_time, trace);
  trace.theta = solver.theta();
  if (!recorder.record(solver.passes(), solver.theta())) return trace;
  const std::size_t total = cfg.passes * model.n();
  const std::size_t every = trace_interval(cfg, model.n());
  for (std::size_t k = 1; k <= total; ++k) {
    try {
      solver.step();
    } catch (const std::domain_error&) {
      trace.status = RunStatus::Diverged;
      return trace;
    }
    if (k % every == 0 || k == total) {
      trace.theta = solver.theta();
      if (!recorder.record(solver.passes(), solver.theta())) return trace;
    }
  }
  return trace;
}

}  // namespace detail

SolverTrace saga_run(const LossModel& model, const Penalty& pen, const RunConfig& cfg) {
  return detail::run_table_method(model, pen, cfg, TableEstimator::Saga);
}

}  // namespace rscsaga
