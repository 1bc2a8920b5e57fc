#pragma once

#include <limits>
#include <string_view>

#include "rscsaga/types.hpp"

namespace rscsaga {

enum class PenaltyKind { L1, GroupL2, SCAD, MCP };

std::string_view to_string(PenaltyKind kind);

/// Regularizer psi (convex kinds) or g_{lambda,mu} (SCAD/MCP) together with its
/// feasible radius rho.
///
/// For SCAD and MCP the optimisation uses the convexified surrogate
///   g_lambda(t) = (g_{lambda,mu}(t) + (mu/2) t^2) / lambda,
/// which is what convex_value() and prox() work with; nonconvex_value() returns
/// the original penalty for reporting.
class Penalty {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static Penalty l1(double lambda, double rho = kInf);
  static Penalty group_l2(double lambda, Groups groups, double rho = kInf);
  static Penalty scad(double lambda, double zeta, double rho = kInf);
  static Penalty mcp(double lambda, double b, double rho = kInf);

  PenaltyKind kind() const noexcept { return kind_; }
  double lambda() const noexcept { return lambda_; }
  double rho() const noexcept { return rho_; }
  double zeta() const noexcept { return zeta_; }
  double mcp_b() const noexcept { return mcp_b_; }
  const Groups& groups() const noexcept { return groups_; }
  bool is_convex() const noexcept { return kind_ == PenaltyKind::L1 || kind_ == PenaltyKind::GroupL2; }

  // Non-convexity parameter: 0, 0, 1/(zeta-1), 1/b.
  double mu() const noexcept;
  // lim_{t->0+} g'(t) / lambda; 1 for every supported kind.
  double l_g() const noexcept { return 1.0; }

  Penalty with_rho(double rho) const;
  Penalty with_lambda(double lambda) const;

  // psi(theta) for L1/GroupL2, g_lambda(theta) for SCAD/MCP.
  double convex_value(const Vector& theta) const;
  // g_{lambda,mu}(theta); throws std::logic_error on convex kinds.
  double nonconvex_value(const Vector& theta) const;
  // ||v||_inf for L1/SCAD/MCP, max_g ||v_g||_2 for GroupL2.
  double dual_norm(const Vector& v) const;

  // argmin_{convex_value(theta) <= rho} (1/2)||theta - w||^2 + step_lambda * convex_value(theta).
  Vector prox(const Vector& w, double step_lambda) const;
  // The same problem without the rho constraint.
  Vector prox_unconstrained(const Vector& w, double step_lambda) const;

  // Scalar pieces, exposed for tests and oracles.
  double scalar_nonconvex(double t) const;
  double scalar_surrogate(double t) const;  // g_lambda(t) for SCAD/MCP, |t| for L1
  double scalar_prox(double w, double step_lambda) const;

 private:
  Penalty(PenaltyKind kind, double lambda, double rho) : kind_(kind), lambda_(lambda), rho_(rho) {}
  void check_groups(Eigen::Index p) const;
  // Smallest extra threshold that maps w to zero.
  double zeroing_threshold(const Vector& w) const;

  PenaltyKind kind_;
  double lambda_;
  double rho_;
  double zeta_ = 0.0;
  double mcp_b_ = 0.0;
  Groups groups_;
};

}  // namespace rscsaga
