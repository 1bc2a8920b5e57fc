#include "rscsaga/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>

#include <fmt/format.h>

namespace rscsaga {

namespace {

constexpr char kCacheMagic[8] = {'R', 'S', 'C', 'R', 'E', 'F', '0', '1'};

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      h_ ^= p[i];
      h_ *= 1099511628211ULL;
    }
  }
  template <class T>
  void value(const T& v) {
    bytes(&v, sizeof(T));
  }
  void doubles(const double* data, std::size_t count) { bytes(data, count * sizeof(double)); }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 14695981039346656037ULL;
};

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

double reference_step(const LossModel& model) {
  // Curvature of F lies in [-shift, lambda_max - shift].
  const double lmax = spectral_bound(model);
  return 1.0 / (1.05 * std::max(lmax, model.mu_shift()));
}

std::optional<ReferenceResult> read_cache(const std::filesystem::path& file, std::uint64_t key,
                                          std::size_t p) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::uint64_t stored_key = 0, stored_p = 0, iterations = 0;
  std::uint32_t status = 0;
  ReferenceResult r;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&stored_key), sizeof stored_key);
  in.read(reinterpret_cast<char*>(&stored_p), sizeof stored_p);
  in.read(reinterpret_cast<char*>(&status), sizeof status);
  in.read(reinterpret_cast<char*>(&iterations), sizeof iterations);
  in.read(reinterpret_cast<char*>(&r.objective), sizeof r.objective);
  in.read(reinterpret_cast<char*>(&r.residual), sizeof r.residual);
  if (!in || std::memcmp(magic, kCacheMagic, sizeof magic) != 0 || stored_key != key || stored_p != p ||
      status > 1) {
    return std::nullopt;
  }
  r.theta.resize(static_cast<Eigen::Index>(p));
  in.read(reinterpret_cast<char*>(r.theta.data()), static_cast<std::streamsize>(p * sizeof(double)));
  if (!in) return std::nullopt;
  r.status = status == 0 ? RunStatus::Converged : RunStatus::Budget;
  r.iterations = iterations;
  r.from_cache = true;
  return r;
}

void write_cache(const std::filesystem::path& dir, const std::filesystem::path& file, std::uint64_t key,
                 const ReferenceResult& r) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create cache directory '" + dir.string() + "': " + ec.message());
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write cache file '" + tmp.string() + "'");
    const std::uint64_t p = static_cast<std::uint64_t>(r.theta.size());
    const std::uint32_t status = r.status == RunStatus::Converged ? 0 : 1;
    const std::uint64_t iterations = r.iterations;
    out.write(kCacheMagic, sizeof kCacheMagic);
    out.write(reinterpret_cast<const char*>(&key), sizeof key);
    out.write(reinterpret_cast<const char*>(&p), sizeof p);
    out.write(reinterpret_cast<const char*>(&status), sizeof status);
    out.write(reinterpret_cast<const char*>(&iterations), sizeof iterations);
    out.write(reinterpret_cast<const char*>(&r.objective), sizeof r.objective);
    out.write(reinterpret_cast<const char*>(&r.residual), sizeof r.residual);
    out.write(reinterpret_cast<const char*>(r.theta.data()), static_cast<std::streamsize>(p * sizeof(double)));
    if (!out) throw IoError("cannot write cache file '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw IoError("cannot move cache file into place: " + ec.message());
}

ReferenceResult solve_reference(const LossModel& model, const Penalty& pen, const ReferenceOptions& opts) {
  const double gamma = reference_step(model);
  const double step_lambda = gamma * pen.lambda();
  Vector theta = Vector::Zero(static_cast<Eigen::Index>(model.p()));
  Vector best = theta;
  double best_res = std::numeric_limits<double>::infinity();
  Vector g, next;
  std::size_t it = 0;
  for (; it < opts.budget; ++it) {
    model.grad_full_into(theta, g);
    next = pen.prox(theta - gamma * g, step_lambda);
    const double res = (theta - next).lpNorm<Eigen::Infinity>();
    if (res < best_res) {
      best_res = res;
      best = theta;
    }
    if (res <= opts.tolerance) break;
    theta.swap(next);
  }
  ReferenceResult r;
  r.theta = std::move(best);
  r.residual = best_res;
  r.status = best_res <= opts.tolerance ? RunStatus::Converged : RunStatus::Budget;
  r.iterations = it;
  r.objective = objective(model, pen, r.theta);
  return r;
}

}  // namespace

double stationarity_residual(const LossModel& model, const Penalty& pen, const Vector& theta, double gamma) {
  const Vector next = pen.prox(theta - gamma * model.grad_full(theta), gamma * pen.lambda());
  return (theta - next).lpNorm<Eigen::Infinity>();
}

double spectral_bound(const LossModel& model) {
  const Matrix& X = model.data().features();
  const double n = static_cast<double>(model.n());
  Vector v = Vector::Constant(X.cols(), 1.0 / std::sqrt(static_cast<double>(X.cols())));
  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const Vector u = X * v;
    Vector w = X.transpose() * u / n;
    const double next = w.norm();
    if (next == 0.0) return 0.0;
    v = w / next;
    const bool done = std::abs(next - lambda) <= 1e-10 * next;
    lambda = next;
    if (done) break;
  }
  return model.kind() == LossKind::Logistic ? lambda / 4.0 : lambda;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("RSC_SAGA_CACHE"); env != nullptr && *env != '\0') return env;
  return ".rsc_saga_cache";
}

std::uint64_t reference_key(const LossModel& model, const Penalty& pen, const ReferenceOptions& opts) {
  Fnv1a h;
  const Dataset& ds = model.data();
  h.value(static_cast<std::uint64_t>(ds.n()));
  h.value(static_cast<std::uint64_t>(ds.p()));
  h.doubles(ds.features().data(), static_cast<std::size_t>(ds.features().size()));
  h.doubles(ds.responses().data(), static_cast<std::size_t>(ds.responses().size()));
  h.value(static_cast<int>(model.kind()));
  h.value(model.gamma_w());
  h.value(model.mu_shift());
  h.value(static_cast<int>(pen.kind()));
  h.value(pen.lambda());
  h.value(pen.rho());
  h.value(pen.zeta());
  h.value(pen.mcp_b());
  for (const auto& g : pen.groups()) {
    h.value(static_cast<std::uint64_t>(g.size()));
    for (std::size_t j : g) h.value(static_cast<std::uint64_t>(j));
  }
  h.value(static_cast<std::uint64_t>(opts.budget));
  h.value(opts.tolerance);
  return h.digest();
}

ReferenceResult reference_solution(const LossModel& model, const Penalty& pen, const ReferenceOptions& opts) {
  check_pipeline(model, pen);
  if (!(opts.tolerance > 0.0)) throw std::invalid_argument("reference tolerance must be > 0");
  if (opts.budget == 0) throw std::invalid_argument("reference budget must be >= 1");
  if (!opts.use_cache) return solve_reference(model, pen, opts);

  const std::filesystem::path dir = opts.cache_dir.empty() ? default_cache_dir() : opts.cache_dir;
  const std::uint64_t key = reference_key(model, pen, opts);
  const std::filesystem::path file = dir / fmt::format("{:016x}.ref", key);
  std::lock_guard<std::mutex> lock(cache_mutex());
  if (auto hit = read_cache(file, key, model.p())) return *hit;
  ReferenceResult r = solve_reference(model, pen, opts);
  write_cache(dir, file, key, r);
  return r;
}

LyapunovCoeffs lyapunov_coeffs(Regime regime, double L, std::size_t n) {
  if (!(L > 0.0) || n == 0) throw std::invalid_argument("L must be > 0 and n >= 1");
  const double k = regime == Regime::Convex ? 9.0 : 24.0;
  LyapunovCoeffs c;
  c.gamma = 1.0 / (k * L);
  c.c = k * L / static_cast<double>(n);
  c.alpha = c.c / 2.0;
  c.coef_b = 2.0 * c.alpha * c.gamma;
  return c;
}

double lyapunov(const LossModel& model, const Penalty& pen, const Matrix& phi, const Vector& theta,
                const Vector& theta_hat, const LyapunovCoeffs& coeffs) {
  const std::size_t n = model.n();
  if (static_cast<std::size_t>(phi.rows()) != n || static_cast<std::size_t>(phi.cols()) != model.p()) {
    throw std::invalid_argument("iterate table has the wrong shape");
  }
  const LossModel convex = model.convex_part();
  double bregman = 0.0;
  Vector phi_i;
  for (std::size_t i = 0; i < n; ++i) {
    phi_i = phi.row(static_cast<Eigen::Index>(i)).transpose();
    const double diff_margin = model.data().row(i).dot(phi_i - theta_hat);
    bregman += convex.sample_value(i, phi_i) - convex.sample_value(i, theta_hat) -
               convex.scalar_residual(i, theta_hat) * diff_margin;
  }
  bregman /= static_cast<double>(n);
  const double dist = (theta - theta_hat).squaredNorm();
  const double gap = objective(model, pen, theta) - objective(model, pen, theta_hat);
  return bregman + (coeffs.c + coeffs.alpha) * dist + coeffs.coef_b * gap;
}

double lyapunov(const LossModel& model, const Penalty& pen, const SagaSolver& solver, const Vector& theta_hat,
                const LyapunovCoeffs& coeffs) {
  return lyapunov(model, pen, solver.iterates(), solver.theta(), theta_hat, coeffs);
}

TheoryReport theory_constants(const TheoryInputs& in) {
  if (!(in.L > 0.0) || in.n == 0) throw std::invalid_argument("L must be > 0 and n >= 1");
  if (in.tau_sigma < 0.0 || in.compat_sq < 0.0 || in.mu < 0.0) {
    throw std::invalid_argument("tau_sigma, compat_sq and mu must be >= 0");
  }
  TheoryReport r;
  r.regime = in.regime;
  r.sigma = in.sigma;
  r.tau_sigma = in.tau_sigma;
  r.compat_sq = in.compat_sq;
  r.L = in.L;
  r.n = in.n;
  r.mu = in.mu;
  r.lyapunov_coeffs = lyapunov_coeffs(in.regime, in.L, in.n);
  const double n = static_cast<double>(in.n);
  if (in.regime == Regime::Convex) {
    r.sigma_bar = in.sigma - 64.0 * in.tau_sigma * in.compat_sq;
    r.rate_guaranteed = r.sigma_bar > 0.0;
    if (r.rate_guaranteed) r.inv_kappa = std::min(r.sigma_bar / (14.0 * in.L), 1.0 / (9.0 * n));
    r.lambda_floor = std::max(2.0 * in.grad_at_star_dual, in.c1_universal * in.tau_sigma * in.rho);
  } else {
    r.sigma_bar = in.sigma - 64.0 * in.compat_sq * in.tau_sigma - in.mu;
    r.rate_guaranteed = r.sigma_bar > 3.0 * in.mu;
    if (r.rate_guaranteed) r.inv_kappa = std::min(2.0 * r.sigma_bar / (5.0 * in.L), 1.0 / n) / 24.0;
    r.lambda_floor = std::max(in.c1_universal * in.rho * in.tau_sigma, 4.0 * in.grad_at_star_dual) / in.l_g;
  }
  if (in.estimation_error) {
    const double inner = 8.0 * std::sqrt(in.compat_sq) * *in.estimation_error + 8.0 * in.psi_star_perp;
    r.delta = 24.0 * in.tau_sigma * inner * inner;
  }
  return r;
}

double lasso_lambda_floor(double noise_std, std::size_t p, std::size_t n) {
  return 6.0 * noise_std * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

std::vector<GapPoint> gap_trace(const SolverTrace& trace, double g_hat) {
  std::vector<GapPoint> out;
  out.reserve(trace.records.size());
  for (const TraceRecord& rec : trace.records) {
    const double gap = rec.objective - g_hat;
    if (gap < -1e-9 * std::abs(g_hat)) {
      throw std::runtime_error(fmt::format("objective {:.17g} at pass {} is below the reference {:.17g}",
                                           rec.objective, rec.pass, g_hat));
    }
    out.push_back({rec.pass, std::max(gap, kGapFloor)});
  }
  return out;
}

LinearFit fit_log_gap(const std::vector<GapPoint>& points, double stop_below) {
  std::size_t m = 0;
  while (m < points.size() && points[m].gap > stop_below) ++m;
  if (m < 2) throw std::invalid_argument("fewer than two points in the decaying region");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += points[i].pass;
    sy += std::log(points[i].gap);
  }
  const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = points[i].pass - mx, dy = std::log(points[i].gap) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("decaying region has a single pass value");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = m;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

std::optional<double> passes_to_reach(const std::vector<GapPoint>& points, double target) {
  for (const GapPoint& pt : points)
    if (pt.gap <= target) return pt.pass;
  return std::nullopt;
}

}  // namespace rscsaga
