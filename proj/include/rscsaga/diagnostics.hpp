#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rscsaga/saga.hpp"

namespace rscsaga {

// ---------------------------------------------------------------------------
// Reference solution

struct ReferenceOptions {
  std::size_t budget = 200000;  // Prox-GD iterations
  double tolerance = 1e-12;     // stationarity residual, infinity norm
  bool use_cache = true;
  // Empty: $RSC_SAGA_CACHE, else ".rsc_saga_cache".
  std::filesystem::path cache_dir;
};

struct ReferenceResult {
  Vector theta;
  double objective = 0.0;
  double residual = 0.0;
  RunStatus status = RunStatus::Budget;  // Converged or Budget
  std::size_t iterations = 0;
  bool from_cache = false;
};

// ||theta - prox(theta - gamma grad F(theta), gamma lambda)||_inf.
double stationarity_residual(const LossModel& model, const Penalty& pen, const Vector& theta, double gamma);

// Largest eigenvalue of X^T X / n by power iteration (quarter of it for logistic).
double spectral_bound(const LossModel& model);

// Prox-GD from zero with step 1/L_full until the residual drops to tolerance.
// Results are cached on disk keyed by a hash of data and parameters; a cache
// hit is bit-identical to the run that produced it. Thread-safe.
ReferenceResult reference_solution(const LossModel& model, const Penalty& pen,
                                   const ReferenceOptions& opts = {});

std::filesystem::path default_cache_dir();
// FNV-1a over the data, loss, penalty and solver settings.
std::uint64_t reference_key(const LossModel& model, const Penalty& pen, const ReferenceOptions& opts);

// ---------------------------------------------------------------------------
// Lyapunov function

enum class Regime { Convex, NonConvex };

struct LyapunovCoeffs {
  double gamma = 0.0;
  double c = 0.0;
  double alpha = 0.0;
  double coef_b = 0.0;
};

// Convex: gamma = 1/(9L), c = 9L/n. Non-convex: 1/(24L), 24L/n. alpha = c/2, coef_b = 2 alpha gamma.
LyapunovCoeffs lyapunov_coeffs(Regime regime, double L, std::size_t n);

// T = (1/n) sum_i B_{f_i}(phi_i, theta_hat) + (c + alpha)||theta - theta_hat||^2
//     + coef_b (G(theta) - G(theta_hat)),
// with B the Bregman divergence of the convex per-sample loss f_i in both
// regimes. Requires a solver built with retain_iterates.
double lyapunov(const LossModel& model, const Penalty& pen, const SagaSolver& solver,
                const Vector& theta_hat, const LyapunovCoeffs& coeffs);

// Same quantity from explicit iterates (rows of phi).
double lyapunov(const LossModel& model, const Penalty& pen, const Matrix& phi, const Vector& theta,
                const Vector& theta_hat, const LyapunovCoeffs& coeffs);

// ---------------------------------------------------------------------------
// Theory constants

struct TheoryInputs {
  Regime regime = Regime::Convex;
  double sigma = 0.0;      // RSC curvature
  double tau_sigma = 0.0;  // RSC tolerance
  double compat_sq = 0.0;  // squared subspace compatibility (r, s_G)
  double L = 1.0;
  std::size_t n = 1;
  double mu = 0.0;
  double rho = Penalty::kInf;
  double grad_at_star_dual = 0.0;  // psi*(grad f(theta*)), or ||.||_inf for non-convex
  double c1_universal = 1.0;
  double l_g = 1.0;
  std::optional<double> estimation_error;  // ||theta_hat - theta*||_2
  double psi_star_perp = 0.0;              // psi(theta*_{M-perp})
};

struct TheoryReport {
  Regime regime = Regime::Convex;
  double sigma = 0.0;
  double tau_sigma = 0.0;
  double compat_sq = 0.0;
  double L = 0.0;
  std::size_t n = 0;
  double mu = 0.0;
  double sigma_bar = 0.0;
  bool rate_guaranteed = false;     // sigma_bar > 0 (convex) or > 3 mu (non-convex)
  std::optional<double> inv_kappa;  // unset when the rate is not guaranteed
  std::optional<double> delta;      // unset without an estimation error
  LyapunovCoeffs lyapunov_coeffs;
  double lambda_floor = 0.0;
};

TheoryReport theory_constants(const TheoryInputs& in);

// Lasso lambda floor 6 sigma sqrt(log p / n).
double lasso_lambda_floor(double noise_std, std::size_t p, std::size_t n);

// ---------------------------------------------------------------------------
// Gap traces

struct GapPoint {
  double pass;
  double gap;
};

inline constexpr double kGapFloor = 1e-16;

// max(G_k - g_hat, 1e-16). Throws std::runtime_error when G_k falls below
// g_hat by more than 1e-9 |g_hat| (the reference is not optimal).
std::vector<GapPoint> gap_trace(const SolverTrace& trace, double g_hat);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

// Least squares of log(gap) against pass over the prefix whose gap stays above
// stop_below (the decaying region). Needs at least two points.
LinearFit fit_log_gap(const std::vector<GapPoint>& points, double stop_below);

// First pass at which gap <= target.
std::optional<double> passes_to_reach(const std::vector<GapPoint>& points, double target);

}  // namespace rscsaga
