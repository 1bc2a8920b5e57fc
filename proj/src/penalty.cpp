#include "rscsaga/penalty.hpp"

#include "rscsaga/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rscsaga {

namespace {

constexpr int kMaxBisection = 200;

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

void check_common(double lambda, double rho) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be > 0");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
}

}  // namespace

std::string_view to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::L1:
      return "l1";
    case PenaltyKind::GroupL2:
      return "group-l2";
    case PenaltyKind::SCAD:
      return "scad";
    case PenaltyKind::MCP:
      return "mcp";
  }
  return "?";
}

Penalty Penalty::l1(double lambda, double rho) {
  check_common(lambda, rho);
  return Penalty(PenaltyKind::L1, lambda, rho);
}

Penalty Penalty::group_l2(double lambda, Groups groups, double rho) {
  check_common(lambda, rho);
  if (groups.empty()) throw std::invalid_argument("group penalty needs at least one group");
  std::size_t max_index = 0;
  for (const auto& g : groups)
    for (std::size_t j : g) max_index = std::max(max_index, j);
  validate_groups(groups, max_index + 1);
  Penalty pen(PenaltyKind::GroupL2, lambda, rho);
  pen.groups_ = std::move(groups);
  return pen;
}

Penalty Penalty::scad(double lambda, double zeta, double rho) {
  check_common(lambda, rho);
  if (!(zeta > 2.0)) throw std::invalid_argument("SCAD requires zeta > 2");
  Penalty pen(PenaltyKind::SCAD, lambda, rho);
  pen.zeta_ = zeta;
  return pen;
}

Penalty Penalty::mcp(double lambda, double b, double rho) {
  check_common(lambda, rho);
  if (!(b > 0.0)) throw std::invalid_argument("MCP requires b > 0");
  Penalty pen(PenaltyKind::MCP, lambda, rho);
  pen.mcp_b_ = b;
  return pen;
}

Penalty Penalty::with_rho(double rho) const {
  check_common(lambda_, rho);
  Penalty copy = *this;
  copy.rho_ = rho;
  return copy;
}

Penalty Penalty::with_lambda(double lambda) const {
  check_common(lambda, rho_);
  Penalty copy = *this;
  copy.lambda_ = lambda;
  return copy;
}

double Penalty::mu() const noexcept {
  switch (kind_) {
    case PenaltyKind::SCAD:
      return 1.0 / (zeta_ - 1.0);
    case PenaltyKind::MCP:
      return 1.0 / mcp_b_;
    default:
      return 0.0;
  }
}

void Penalty::check_groups(Eigen::Index p) const {
  for (const auto& g : groups_)
    for (std::size_t j : g)
      if (static_cast<Eigen::Index>(j) >= p)
        throw std::invalid_argument("group index " + std::to_string(j) + " exceeds dimension");
}

double Penalty::scalar_nonconvex(double t) const {
  const double a = std::abs(t);
  const double lam = lambda_;
  switch (kind_) {
    case PenaltyKind::SCAD:
      if (a <= lam) return lam * a;
      if (a <= zeta_ * lam) return -(a * a - 2.0 * zeta_ * lam * a + lam * lam) / (2.0 * (zeta_ - 1.0));
      return (zeta_ + 1.0) * lam * lam / 2.0;
    case PenaltyKind::MCP:
      // lambda * int_0^|t| (1 - z/(lambda b))_+ dz
      if (a <= lam * mcp_b_) return lam * a - a * a / (2.0 * mcp_b_);
      return lam * lam * mcp_b_ / 2.0;
    default:
      throw std::logic_error("nonconvex value requested for a convex penalty");
  }
}

double Penalty::scalar_surrogate(double t) const {
  if (kind_ == PenaltyKind::L1) return std::abs(t);
  if (kind_ == PenaltyKind::GroupL2) throw std::logic_error("group penalty is not separable");
  return (scalar_nonconvex(t) + 0.5 * mu() * t * t) / lambda_;
}

double Penalty::scalar_prox(double w, double step) const {
  const double v = std::abs(w);
  if (v <= step) return 0.0;
  switch (kind_) {
    case PenaltyKind::L1:
      return sign(w) * (v - step);
    case PenaltyKind::SCAD: {
      // Stationarity of (1/2)(t-v)^2 + step * g_lambda(t) on t > 0; the
      // derivative of SCAD + (mu/2)t^2 is lambda + mu t, zeta lambda mu, mu t
      // on the three SCAD pieces.
      const double m = mu();
      const double a = step / lambda_;
      const double knee = step * zeta_ * m;
      double t;
      if (v <= lambda_ + knee) {
        t = (v - step) / (1.0 + a * m);
      } else if (v <= zeta_ * lambda_ + knee) {
        t = v - knee;
      } else {
        t = v / (1.0 + a * m);
      }
      return sign(w) * t;
    }
    case PenaltyKind::MCP: {
      // MCP + t^2/(2b) has derivative lambda below lambda b and t/b above.
      const double a = step / lambda_;
      double t;
      if (v <= lambda_ * mcp_b_ + step) {
        t = v - step;
      } else {
        t = v / (1.0 + a / mcp_b_);
      }
      return sign(w) * t;
    }
    case PenaltyKind::GroupL2:
      break;
  }
  throw std::logic_error("group penalty is not separable");
}

double Penalty::convex_value(const Vector& theta) const {
  if (kind_ == PenaltyKind::GroupL2) {
    check_groups(theta.size());
    double s = 0.0;
    for (const auto& g : groups_) {
      double sq = 0.0;
      for (std::size_t j : g) sq += theta[static_cast<Eigen::Index>(j)] * theta[static_cast<Eigen::Index>(j)];
      s += std::sqrt(sq);
    }
    return s;
  }
  if (kind_ == PenaltyKind::L1) return theta.lpNorm<1>();
  double s = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) s += scalar_surrogate(theta[j]);
  return s;
}

double Penalty::nonconvex_value(const Vector& theta) const {
  if (is_convex()) throw std::logic_error("nonconvex value requested for a convex penalty");
  double s = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) s += scalar_nonconvex(theta[j]);
  return s;
}

double Penalty::dual_norm(const Vector& v) const {
  if (kind_ != PenaltyKind::GroupL2) return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  check_groups(v.size());
  double best = 0.0;
  for (const auto& g : groups_) {
    double sq = 0.0;
    for (std::size_t j : g) sq += v[static_cast<Eigen::Index>(j)] * v[static_cast<Eigen::Index>(j)];
    best = std::max(best, std::sqrt(sq));
  }
  return best;
}

Vector Penalty::prox_unconstrained(const Vector& w, double step) const {
  if (!(step >= 0.0)) throw std::invalid_argument("prox step must be >= 0");
  if (!w.allFinite()) throw std::domain_error("prox input is not finite");
  if (kind_ != PenaltyKind::GroupL2) {
    Vector out(w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) out[j] = scalar_prox(w[j], step);
    return out;
  }
  check_groups(w.size());
  Vector out = w;  // coordinates outside every group are unpenalised
  for (const auto& g : groups_) {
    double sq = 0.0;
    for (std::size_t j : g) sq += w[static_cast<Eigen::Index>(j)] * w[static_cast<Eigen::Index>(j)];
    const double norm = std::sqrt(sq);
    const double scale = norm <= step ? 0.0 : 1.0 - step / norm;
    for (std::size_t j : g) out[static_cast<Eigen::Index>(j)] = scale * w[static_cast<Eigen::Index>(j)];
  }
  return out;
}

double Penalty::zeroing_threshold(const Vector& w) const {
  if (kind_ == PenaltyKind::GroupL2) return dual_norm(w);
  return w.size() == 0 ? 0.0 : w.lpNorm<Eigen::Infinity>();
}

Vector Penalty::prox(const Vector& w, double step) const {
  Vector theta = prox_unconstrained(w, step);
  if (!std::isfinite(rho_) || convex_value(theta) <= rho_) return theta;

  // Active constraint: raise the threshold by nu >= 0 until the value hits rho.
  // The value of prox(w, step + nu) is continuous and non-increasing in nu.
  const double tol = 1e-10 * std::max(1.0, rho_);
  double lo = 0.0;
  double hi = zeroing_threshold(w);
  Vector feasible = prox_unconstrained(w, step + hi);
  double feasible_value = convex_value(feasible);
  for (int it = 0; it < kMaxBisection; ++it) {
    if (rho_ - feasible_value <= tol) return feasible;
    const double mid = 0.5 * (lo + hi);
    Vector cand = prox_unconstrained(w, step + mid);
    const double v = convex_value(cand);
    if (v <= rho_) {
      hi = mid;
      feasible = std::move(cand);
      feasible_value = v;
    } else {
      lo = mid;
    }
  }
  if (rho_ - feasible_value <= tol) return feasible;
  throw std::runtime_error("constrained prox: bisection did not converge");
}

}  // namespace rscsaga
