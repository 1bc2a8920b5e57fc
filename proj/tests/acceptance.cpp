// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when a
// criterion fails that was not declared with --known-failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "oracles.hpp"
#include "rscsaga/experiment.hpp"

using namespace rscsaga;

namespace {

const std::filesystem::path kWork = std::filesystem::temp_directory_path() / "rscsaga_acceptance";

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::vector<int> failed;

void report(int id, const std::string& title, const Verdict& v) {
  fmt::print("{} criterion {:>2}: {} ({})\n", v.pass ? "PASS" : "FAIL", id, title, v.detail);
  std::cout.flush();
  if (!v.pass) failed.push_back(id);
}

void guarded(int id, const std::string& title, const std::function<Verdict()>& body) {
  try {
    report(id, title, body());
  } catch (const std::exception& e) {
    report(id, title, {false, std::string("exception: ") + e.what()});
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Seed-averaged gap per record; traces of one algorithm share the pass grid.
std::vector<GapPoint> mean_gap(const std::vector<SolverTrace>& traces, double g_hat) {
  std::vector<GapPoint> mean;
  for (const SolverTrace& t : traces) {
    const std::vector<GapPoint> g = gap_trace(t, g_hat);
    if (mean.empty()) {
      mean = g;
      for (GapPoint& pt : mean) pt.gap = 0.0;
    }
    if (g.size() != mean.size()) throw std::runtime_error("traces have different lengths");
    for (std::size_t k = 0; k < g.size(); ++k) mean[k].gap += g[k].gap / static_cast<double>(traces.size());
  }
  return mean;
}

ExperimentSummary run_saga(ExperimentConfig cfg, const std::string& tag, std::vector<Algorithm> algorithms,
                           double* seconds = nullptr) {
  cfg.algorithms = std::move(algorithms);
  cfg.output_dir = kWork / tag;
  // Fill the reference cache first so the timing covers the solvers only.
  const Problem problem = build_problem(cfg);
  ReferenceOptions ref;
  ref.budget = cfg.reference_budget;
  ref.tolerance = cfg.reference_tolerance;
  const ReferenceResult r = reference_solution(problem.model, problem.penalty, ref);
  if (r.status != RunStatus::Converged) {
    throw std::runtime_error(fmt::format("reference for {} stopped at residual {:.3g}", tag, r.residual));
  }
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentSummary s = run_experiment(cfg);
  if (seconds) *seconds = seconds_since(t0);
  return s;
}

const AlgorithmSummary& find(const ExperimentSummary& s, Algorithm a) {
  for (const AlgorithmSummary& as : s.algorithms)
    if (as.algorithm == a) return as;
  throw std::runtime_error("algorithm missing from summary");
}

// Linear convergence check shared by criteria 1 and 3.
Verdict linear_convergence(const ExperimentSummary& s, double target, double max_pass, double* seconds) {
  const AlgorithmSummary& saga = find(s, Algorithm::SAGA);
  if (!saga.chosen) return {false, "SAGA diverged at every grid step"};
  const std::vector<GapPoint> gaps = mean_gap(saga.traces, s.reference.objective);
  const double initial = gaps.front().gap;
  std::vector<GapPoint> window;
  for (const GapPoint& pt : gaps)
    if (pt.pass <= max_pass + 1e-9) window.push_back(pt);
  double best = std::numeric_limits<double>::infinity();
  for (const GapPoint& pt : window) best = std::min(best, pt.gap / initial);
  const LinearFit fit = fit_log_gap(window, target * initial);
  Verdict v;
  v.pass = best <= target && fit.slope < 0.0 && fit.r2 >= 0.95;
  v.detail = fmt::format("step {:.6g}, {} seeds, best mean gap/initial {:.3e} (target {:.0e}) within {} passes, "
                         "slope {:.4f}, R^2 {:.4f} over {} points",
                         *saga.chosen, saga.traces.size(), best, target, max_pass, fit.slope, fit.r2, fit.points);
  if (seconds) {
    v.pass = v.pass && *seconds <= 30.0;
    v.detail += fmt::format(", solver time {:.1f} s (limit 30 s)", *seconds);
  }
  return v;
}

// ---------------------------------------------------------------------------

Verdict criterion1() {
  const ExperimentConfig cfg = preset("lasso-fig1a-desk");
  double seconds = 0.0;
  const ExperimentSummary s = run_saga(cfg, "c1", {Algorithm::SAGA}, &seconds);
  return linear_convergence(s, 1e-10, static_cast<double>(cfg.passes), &seconds);
}

Verdict criterion2() {
  auto median_passes = [](std::size_t r) {
    ExperimentConfig cfg = preset("lasso-fig1a-desk");
    cfg.synthetic.r = r;
    const ExperimentSummary s = run_saga(cfg, fmt::format("c2_r{}", r), {Algorithm::SAGA});
    const AlgorithmSummary& saga = find(s, Algorithm::SAGA);
    std::vector<double> passes;
    for (const SolverTrace& t : saga.traces) {
      const std::vector<GapPoint> g = gap_trace(t, s.reference.objective);
      const auto hit = passes_to_reach(g, 1e-6 * g.front().gap);
      passes.push_back(hit.value_or(std::numeric_limits<double>::infinity()));
    }
    std::sort(passes.begin(), passes.end());
    return passes[passes.size() / 2];
  };
  const double m25 = median_passes(25);
  const double m100 = median_passes(100);
  return {m25 <= m100, fmt::format("median passes to 1e-6 x initial gap: r=25 -> {}, r=100 -> {}", m25, m100)};
}

Verdict criterion3() {
  const ExperimentConfig scad_cfg = preset("scad-fig4a-desk");
  const Verdict scad = linear_convergence(run_saga(scad_cfg, "c3_scad", {Algorithm::SAGA}), 1e-8,
                                          static_cast<double>(scad_cfg.passes), nullptr);
  const ExperimentConfig corr_cfg = preset("corrected-lasso-fig3a-desk");
  const Verdict corr = linear_convergence(run_saga(corr_cfg, "c3_corrected", {Algorithm::SAGA}), 1e-8,
                                          static_cast<double>(corr_cfg.passes), nullptr);
  return {scad.pass && corr.pass, "SCAD: " + scad.detail + "; corrected Lasso: " + corr.detail};
}

std::shared_ptr<const Dataset> random_data(std::size_t n, std::size_t p, std::uint64_t seed, bool labels) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = normal(rng);
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = labels ? (normal(rng) > 0 ? 1.0 : -1.0) : normal(rng);
  return std::make_shared<const Dataset>(std::move(X), std::move(y));
}

Vector random_vector(Eigen::Index p, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(p);
  for (Eigen::Index j = 0; j < p; ++j) v[j] = normal(rng);
  return v;
}

Verdict criterion4() {
  std::mt19937_64 rng(4);
  struct Setting {
    LossKind kind;
    double gamma_w;
    Penalty pen;
    TableMode mode;
  };
  const std::vector<Setting> settings = {
      {LossKind::SquaredError, 0.0, Penalty::l1(0.05), TableMode::Scalars},
      {LossKind::SquaredError, 0.0, Penalty::l1(0.05), TableMode::FullVectors},
      {LossKind::Logistic, 0.0, Penalty::l1(0.01), TableMode::Scalars},
      {LossKind::SquaredError, 0.0, Penalty::scad(0.05, 3.7), TableMode::FullVectors},
      {LossKind::SquaredError, 0.0, Penalty::mcp(0.05, 3.0), TableMode::FullVectors},
      {LossKind::CorrectedQuadratic, 0.1, Penalty::l1(0.05, 5.0), TableMode::FullVectors},
  };
  double worst = 0.0;
  int states = 0;
  for (int s = 0; s < 100; ++s) {
    const Setting& set = settings[static_cast<std::size_t>(s) % settings.size()];
    const auto data = random_data(30, 12, 100 + static_cast<std::uint64_t>(s), set.kind == LossKind::Logistic);
    const LossModel model = make_model(set.kind, data, set.pen, set.gamma_w);
    SagaOptions opts;
    opts.step = 0.01;
    opts.seed = static_cast<std::uint64_t>(s);
    opts.table_mode = set.mode;
    SagaSolver solver(model, set.pen, oracles::make_feasible(set.pen, random_vector(12, rng, 0.3)), opts);
    const int steps = std::uniform_int_distribution<int>(0, 200)(rng);
    for (int k = 0; k < steps; ++k) solver.step();
    Vector mean = Vector::Zero(12);
    for (std::size_t j = 0; j < model.n(); ++j) mean += solver.direction(j);
    mean /= static_cast<double>(model.n());
    const Vector full = model.grad_full(solver.theta());
    worst = std::max(worst, (mean - full).norm() / std::max(1.0, full.norm()));
    ++states;
  }
  return {worst <= 1e-12, fmt::format("{} states, worst relative error {:.2e} (limit 1e-12)", states, worst)};
}

Verdict criterion5() {
  double drift = 0.0;
  for (TableMode mode : {TableMode::FullVectors, TableMode::Scalars}) {
    for (LossKind kind : {LossKind::SquaredError, LossKind::Logistic}) {
      const auto data = random_data(100, 40, 5, kind == LossKind::Logistic);
      const LossModel model(kind, data);
      const Penalty pen = Penalty::l1(0.01);
      SagaOptions opts;
      opts.step = 0.002;
      opts.seed = 6;
      opts.table_mode = mode;
      SagaSolver solver(model, pen, Vector::Zero(40), opts);
      for (int k = 0; k < 10000; ++k) solver.step();
      const Vector fresh = solver.table().recomputed_mean();
      drift = std::max(drift, (solver.table().average() - fresh).norm() / std::max(1.0, fresh.norm()));
    }
  }
  double mode_gap = 0.0;
  for (LossKind kind : {LossKind::SquaredError, LossKind::Logistic}) {
    const auto data = random_data(100, 40, 7, kind == LossKind::Logistic);
    const LossModel model(kind, data);
    const Penalty pen = Penalty::l1(0.01);
    SagaOptions opts;
    opts.step = 0.002;
    opts.seed = 8;
    opts.table_mode = TableMode::FullVectors;
    SagaSolver full(model, pen, Vector::Zero(40), opts);
    opts.table_mode = TableMode::Scalars;
    SagaSolver scalars(model, pen, Vector::Zero(40), opts);
    for (int k = 0; k < 10000; ++k) {
      full.step();
      scalars.step();
      mode_gap = std::max(mode_gap, (full.theta() - scalars.theta()).lpNorm<Eigen::Infinity>());
    }
  }
  return {drift <= 1e-8 && mode_gap <= 1e-10,
          fmt::format("average drift {:.2e} (limit 1e-8), Scalars vs FullVectors max iterate difference {:.2e} "
                      "(limit 1e-10)",
                      drift, mode_gap)};
}

// Scales c back into the feasible set; exact for homogeneous penalties.
Vector feasible(const Penalty& pen, const Vector& c) {
  const double v = pen.convex_value(c);
  if (v <= pen.rho()) return c;
  if (pen.is_convex()) return c * (pen.rho() / v) * (1.0 - 1e-15);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (pen.convex_value(mid * c) <= pen.rho() ? lo : hi) = mid;
  }
  return lo * c;
}

double probe(const Penalty& pen, const Vector& theta, const Vector& w, double step, int candidates,
             std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> logscale(-6.0, 0.5);
  const double h = oracles::prox_objective(pen, theta, w, step);
  double worst = std::numeric_limits<double>::infinity();
  Vector dir(theta.size());
  for (int k = 0; k < candidates; ++k) {
    for (Eigen::Index j = 0; j < dir.size(); ++j) dir[j] = normal(rng);
    const double r = std::pow(10.0, logscale(rng));
    const Vector c = feasible(pen, (k % 2 == 0 ? theta : w) + r * dir.normalized());
    worst = std::min(worst, oracles::prox_objective(pen, c, w, step) - h - 0.5 * (c - theta).squaredNorm());
  }
  return worst;
}

Verdict criterion6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Groups groups = {{0, 1}, {2, 3}};
  const std::vector<std::pair<std::string, std::function<Penalty(double, double)>>> kinds = {
      {"l1", [](double lam, double rho) { return Penalty::l1(lam, rho); }},
      {"group-l2", [&](double lam, double rho) { return Penalty::group_l2(lam, groups, rho); }},
      {"scad", [](double lam, double rho) { return Penalty::scad(lam, 3.7, rho); }},
      {"mcp", [](double lam, double rho) { return Penalty::mcp(lam, 2.5, rho); }},
  };
  double worst_unconstrained = 0.0;
  double worst_probe = std::numeric_limits<double>::infinity();
  double worst_feasibility = 0.0;
  double worst_expansion = 0.0;
  for (const auto& [name, make] : kinds) {
    for (int t = 0; t < 200; ++t) {
      const double lambda = 0.05 + unif(rng);
      const double step = 0.05 + unif(rng);
      const Vector w = random_vector(4, rng, 2.0);
      const Penalty free_pen = make(lambda, Penalty::kInf);
      const Vector got = free_pen.prox(w, step * lambda);
      Vector expect(4);
      if (name == "group-l2") {
        expect = oracles::group_prox_oracle(free_pen, w, step * lambda);
      } else {
        for (Eigen::Index j = 0; j < 4; ++j) expect[j] = oracles::scalar_prox_oracle(free_pen, w[j], step * lambda);
      }
      worst_unconstrained = std::max(worst_unconstrained, (got - expect).lpNorm<Eigen::Infinity>());

      const double rho = 0.1 + 0.5 * unif(rng) * free_pen.convex_value(w);
      const Penalty pen = make(lambda, rho);
      const Vector theta = pen.prox(w, step * lambda);
      worst_feasibility = std::max(worst_feasibility, pen.convex_value(theta) - rho);
      worst_probe = std::min(worst_probe, probe(pen, theta, w, step * lambda, 100000, rng));
    }
    for (int t = 0; t < 500; ++t) {
      const double lambda = 0.05 + unif(rng);
      const double rho = t % 2 == 0 ? Penalty::kInf : 0.2 + 2.0 * unif(rng);
      const Penalty pen = make(lambda, rho);
      const double step = 0.05 + unif(rng);
      const Vector a = random_vector(4, rng, 2.0);
      const Vector b = random_vector(4, rng, 2.0);
      const double ratio =
          (pen.prox(a, step * lambda) - pen.prox(b, step * lambda)).norm() / std::max((a - b).norm(), 1e-300);
      worst_expansion = std::max(worst_expansion, ratio);
    }
  }
  const bool ok = worst_unconstrained <= 1e-6 && worst_probe >= -1e-6 && worst_feasibility <= 1e-9 &&
                  worst_expansion <= 1.0 + 1e-12;
  return {ok, fmt::format("unconstrained max error {:.2e}, constrained probe worst slack {:.2e} (10^5 candidates), "
                          "feasibility excess {:.2e}, max ||prox(a)-prox(b)||/||a-b|| {:.15f}",
                          worst_unconstrained, worst_probe, worst_feasibility, worst_expansion)};
}

Verdict criterion7() {
  const ExperimentConfig cfg = preset("lasso-fig1a-desk");
  const Problem problem = build_problem(cfg);
  const ReferenceResult ref = reference_solution(problem.model, problem.penalty);
  const double L = problem.model.smoothness_bound();
  const std::size_t n = problem.model.n();
  const LyapunovCoeffs coeffs = lyapunov_coeffs(Regime::Convex, L, n);

  // RSC inputs with sigma_bar > 0; tau_sigma is chosen so that sigma_bar = sigma / 2.
  TheoryInputs in;
  in.regime = Regime::Convex;
  in.sigma = 0.5;
  in.compat_sq = static_cast<double>(cfg.synthetic.r);
  in.tau_sigma = in.sigma / (128.0 * in.compat_sq);
  in.L = L;
  in.n = n;
  in.estimation_error = (ref.theta - problem.theta_star).norm();
  const TheoryReport theory = theory_constants(in);
  if (!theory.rate_guaranteed || !theory.delta) return {false, "theory inputs do not give sigma_bar > 0"};
  const double delta = *theory.delta;

  constexpr int kSeeds = 20;
  constexpr std::size_t kPasses = 40;
  std::vector<double> mean_t(kPasses + 1, 0.0), mean_gap(kPasses + 1, 0.0);
  std::vector<std::vector<double>> per_seed(kSeeds);
#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < kSeeds; ++s) {
    SagaOptions opts;
    opts.step = coeffs.gamma;
    opts.seed = 1000 + static_cast<std::uint64_t>(s);
    opts.table_mode = TableMode::Scalars;
    opts.retain_iterates = true;
    SagaSolver solver(problem.model, problem.penalty, Vector::Zero(static_cast<Eigen::Index>(problem.model.p())),
                      opts);
    std::vector<double> values;
    values.push_back(lyapunov(problem.model, problem.penalty, solver, ref.theta, coeffs));
    values.push_back(objective(problem.model, problem.penalty, solver.theta()) - ref.objective);
    for (std::size_t k = 1; k <= kPasses; ++k) {
      for (std::size_t i = 0; i < n; ++i) solver.step();
      values.push_back(lyapunov(problem.model, problem.penalty, solver, ref.theta, coeffs));
      values.push_back(objective(problem.model, problem.penalty, solver.theta()) - ref.objective);
    }
    per_seed[static_cast<std::size_t>(s)] = std::move(values);
  }
  for (const auto& values : per_seed) {
    for (std::size_t k = 0; k <= kPasses; ++k) {
      mean_t[k] += values[2 * k] / kSeeds;
      mean_gap[k] += values[2 * k + 1] / kSeeds;
    }
  }
  bool monotone = true;
  std::size_t checked = 0;
  for (std::size_t k = 1; k <= kPasses && mean_gap[k - 1] > delta; ++k) {
    ++checked;
    if (mean_t[k] > mean_t[k - 1] * (1.0 + 1e-3)) monotone = false;
  }
  // Smallest q with T_k <= T_0 q^k at every traced k (k counted in steps).
  double q = 0.0;
  for (std::size_t k = 1; k <= kPasses; ++k) {
    q = std::max(q, std::pow(mean_t[k] / mean_t[0], 1.0 / static_cast<double>(k * n)));
  }
  const bool rate = q < 1.0;
  return {monotone && rate && checked > 0,
          fmt::format("{} seeds, step 1/(9L) = {:.3e}, delta {:.3e}, {} monotone steps checked before the gap "
                      "reached delta, T_0 {:.4g} -> T_{} {:.4g}, empirical q = 1 - {:.3e} per step",
                      kSeeds, coeffs.gamma, delta, checked, mean_t[0], kPasses * n, mean_t[kPasses], 1.0 - q)};
}

Verdict criterion8() {
  ExperimentConfig cfg = preset("lasso-fig1a-desk");
  cfg.passes = 100;
  const ExperimentSummary s = run_saga(cfg, "c8", {Algorithm::SAGA, Algorithm::ProxSGD, Algorithm::RDA});
  auto mean_final = [&](Algorithm a) {
    const AlgorithmSummary& as = find(s, a);
    double sum = 0.0;
    for (const SolverTrace& t : as.traces) sum += final_gap(t, s.reference.objective);
    return sum / static_cast<double>(as.traces.size());
  };
  const double saga = mean_final(Algorithm::SAGA);
  const double sgd = mean_final(Algorithm::ProxSGD);
  const double rda = mean_final(Algorithm::RDA);
  const bool ordering = sgd >= 100.0 * saga && rda >= 100.0 * saga;

  bool monotone = true;
  std::size_t steps = 0;
  std::string worst_preset;
  double worst_rise = -std::numeric_limits<double>::infinity();
  for (const char* name : {"lasso-fig1a-desk", "lasso-fig1b-desk", "lasso-fig1c-desk", "lasso-fig1d-desk",
                           "group-lasso-fig2a-desk", "group-lasso-fig2b-desk", "group-lasso-fig2c-desk",
                           "group-lasso-fig2d-desk"}) {
    const Problem p = build_problem(preset(name));
    RunConfig rc;
    rc.step = 1.0 / spectral_bound(p.model);
    rc.passes = 100;
    rc.trace_every = 1;
    rc.record_time = false;
    const SolverTrace t = prox_gd_run(p.model, p.penalty, rc);
    for (std::size_t k = 1; k < t.records.size(); ++k) {
      const double prev = t.records[k - 1].objective;
      const double rise = (t.records[k].objective - prev) / std::abs(prev);
      if (rise > worst_rise) {
        worst_rise = rise;
        worst_preset = name;
      }
      if (t.records[k].objective > prev + 1e-12 * std::abs(prev)) monotone = false;
      ++steps;
    }
  }
  return {ordering && monotone,
          fmt::format("mean final gap at 100 passes: SAGA {:.3e}, Prox-SGD {:.3e} (x{:.2g}), RDA {:.3e} (x{:.2g}); "
                      "Prox-GD step 1/L monotone over {} steps on 8 convex presets, largest relative change {:.2e}",
                      saga, sgd, sgd / saga, rda, rda / saga, steps, worst_rise)};
}

// Direct evaluation of the rate constants for criterion 9.
struct Expected {
  bool guaranteed;
  double inv_kappa;
};

Expected direct_rate(const TheoryInputs& in) {
  const double H2 = in.compat_sq;
  const double n = static_cast<double>(in.n);
  if (in.regime == Regime::Convex) {
    const double sigma_bar = in.sigma - 64.0 * in.tau_sigma * H2;
    if (!(sigma_bar > 0.0)) return {false, 0.0};
    return {true, std::min(sigma_bar / (14.0 * in.L), 1.0 / (9.0 * n))};
  }
  const double sigma_bar = in.sigma - 64.0 * H2 * in.tau_sigma - in.mu;
  if (!(sigma_bar > 3.0 * in.mu)) return {false, 0.0};
  return {true, std::min(2.0 * sigma_bar / (5.0 * in.L), 1.0 / n) / 24.0};
}

Verdict criterion9() {
  std::vector<TheoryInputs> table;
  auto add = [&](Regime regime, double sigma, double tau, double h2, double L, std::size_t n, double mu) {
    TheoryInputs in;
    in.regime = regime;
    in.sigma = sigma;
    in.tau_sigma = tau;
    in.compat_sq = h2;
    in.L = L;
    in.n = n;
    in.mu = mu;
    table.push_back(in);
  };
  // Convex: interior points on both sides of the min, then sigma_bar = 0 and < 0.
  add(Regime::Convex, 1.0, 0.0, 10.0, 1.0, 10, 0.0);
  add(Regime::Convex, 1.0, 1e-4, 25.0, 100.0, 10, 0.0);
  add(Regime::Convex, 0.5, 1e-5, 50.0, 1000.0, 500, 0.0);
  add(Regime::Convex, 2.0, 1e-3, 4.0, 3.0, 100000, 0.0);
  add(Regime::Convex, 0.01, 0.0, 1.0, 10.0, 2, 0.0);
  add(Regime::Convex, 0.3, 1e-4, 10.0, 1.0, 1, 0.0);
  add(Regime::Convex, 1.0, 1.0 / 640.0, 10.0, 1.0, 10, 0.0);
  add(Regime::Convex, 1.0, 0.5, 10.0, 1.0, 10, 0.0);
  add(Regime::Convex, 0.0, 0.0, 10.0, 1.0, 10, 0.0);
  add(Regime::Convex, -0.5, 0.0, 10.0, 1.0, 10, 0.0);
  // Non-convex: interior points, then sigma_bar = 3 mu, below it, and sigma_bar <= 0.
  add(Regime::NonConvex, 1.0, 0.0, 10.0, 1.0, 10, 0.2);
  add(Regime::NonConvex, 2.0, 1e-4, 15.0, 600.0, 600, 1.0 / 3.5);
  add(Regime::NonConvex, 1.5, 1e-5, 50.0, 50.0, 100000, 0.1);
  add(Regime::NonConvex, 4.0, 1e-3, 4.0, 2.0, 3, 0.5);
  add(Regime::NonConvex, 0.9, 0.0, 1.0, 0.1, 1, 0.05);
  add(Regime::NonConvex, 1.0, 0.0, 10.0, 1.0, 10, 0.25);
  add(Regime::NonConvex, 1.0, 0.0, 10.0, 1.0, 10, 0.3);
  add(Regime::NonConvex, 1.0, 1.0 / 640.0, 10.0, 1.0, 10, 0.0);
  add(Regime::NonConvex, 0.5, 0.01, 10.0, 1.0, 10, 0.1);
  add(Regime::NonConvex, 1.0, 0.0, 10.0, 1.0, 10, 1.0);

  std::size_t mismatches = 0, flags_off = 0;
  for (const TheoryInputs& in : table) {
    const TheoryReport r = theory_constants(in);
    const Expected e = direct_rate(in);
    if (r.rate_guaranteed != e.guaranteed || r.inv_kappa.has_value() != e.guaranteed) ++mismatches;
    if (!e.guaranteed) ++flags_off;
    if (e.guaranteed && r.inv_kappa && *r.inv_kappa != e.inv_kappa) ++mismatches;
  }
  return {mismatches == 0 && table.size() == 20,
          fmt::format("{} input combinations, {} with the boundary flag set, {} mismatches", table.size(), flags_off,
                      mismatches)};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion10() {
  ExperimentConfig cfg = preset("lasso-fig1a-desk");
  cfg.passes = 10;
  cfg.seeds = {1, 2};
  cfg.record_time = false;
  cfg.output_dir = kWork / "c10_a";
  std::filesystem::remove_all(cfg.output_dir);
  const ExperimentSummary a = run_experiment(cfg);
  cfg.output_dir = kWork / "c10_b";
  std::filesystem::remove_all(cfg.output_dir);
  const ExperimentSummary b = run_experiment(cfg);
  std::size_t identical = 0;
  bool ok = a.files.size() == b.files.size();
  for (std::size_t i = 0; ok && i < a.files.size(); ++i) {
    if (a.files[i].filename() != b.files[i].filename() || slurp(a.files[i]) != slurp(b.files[i])) {
      ok = false;
    } else {
      ++identical;
    }
  }
  return {ok, fmt::format("{} of {} CSV files byte-identical across two runs", identical, a.files.size())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-10"};
  std::vector<int> known;
  app.add_option("--known-failure", known, "Criterion expected to fail; reported but not fatal");
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(kWork);
  const auto t0 = std::chrono::steady_clock::now();
  guarded(1, "linear convergence, convex Lasso", criterion1);
  guarded(2, "sparser truth converges no slower", criterion2);
  guarded(3, "linear convergence, SCAD and corrected Lasso", criterion3);
  guarded(4, "SAGA direction is unbiased", criterion4);
  guarded(5, "gradient table integrity", criterion5);
  guarded(6, "prox operators match brute-force oracles", criterion6);
  guarded(7, "Lyapunov function contracts", criterion7);
  guarded(8, "baseline ordering and Prox-GD monotonicity", criterion8);
  guarded(9, "theory constants", criterion9);
  guarded(10, "byte-identical reruns", criterion10);
  fmt::print("{} of 10 criteria failed; total {:.0f} s\n", failed.size(), seconds_since(t0));
  int unexpected = 0;
  for (int id : failed) {
    if (std::find(known.begin(), known.end(), id) != known.end()) {
      fmt::print("criterion {} is a known failure\n", id);
    } else {
      ++unexpected;
    }
  }
  for (int id : known)
    if (std::find(failed.begin(), failed.end(), id) == failed.end()) fmt::print("criterion {} now passes\n", id);
  return unexpected == 0 ? 0 : 1;
}
