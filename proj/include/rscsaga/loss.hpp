#pragma once

#include <memory>
#include <string_view>

#include "rscsaga/dataset.hpp"
#include "rscsaga/kernels.hpp"

namespace rscsaga {

enum class LossKind { SquaredError, Logistic, CorrectedQuadratic };

std::string_view to_string(LossKind kind);

/// Smooth finite-sum loss F(theta) = (1/n) sum_i f_i(theta) - (mu_shift/2) ||theta||^2.
///
/// Every f_i is a convex GLM piece g(x_i^T theta; y_i):
///   SquaredError        (1/2)(x_i^T theta - y_i)^2
///   Logistic            log(1 + exp(-y_i x_i^T theta))
///   CorrectedQuadratic  (1/2)(z_i^T theta - y_i)^2, the -(gamma_w/2)||theta||^2 term
///                       enters only through mu_shift (= gamma_w + penalty mu).
/// The non-convex pipeline subtracts the penalty's mu the same way, so each
/// F_i = f_i - (mu_shift/2)||.||^2 stays a cheap per-sample evaluation.
class LossModel {
 public:
  LossModel(LossKind kind, std::shared_ptr<const Dataset> data, double gamma_w = 0.0,
            double mu_shift = 0.0);

  LossKind kind() const noexcept { return kind_; }
  const Dataset& data() const noexcept { return *data_; }
  std::shared_ptr<const Dataset> data_ptr() const noexcept { return data_; }
  std::size_t n() const noexcept { return data_->n(); }
  std::size_t p() const noexcept { return data_->p(); }
  double gamma_w() const noexcept { return gamma_w_; }
  double mu_shift() const noexcept { return mu_shift_; }

  // Same data and kind, different shift.
  LossModel with_mu_shift(double mu_shift) const;
  // The convex part (1/n) sum f_i, i.e. mu_shift = 0.
  LossModel convex_part() const { return with_mu_shift(0.0); }

  double value(const Vector& theta) const;
  Vector grad_full(const Vector& theta) const;
  void grad_full_into(const Vector& theta, Vector& out) const;

  Vector grad_sample(std::size_t i, const Vector& theta) const;
  void grad_sample_into(std::size_t i, const Vector& theta, Vector& out) const;

  // F_i(theta) = f_i(theta) - (mu_shift/2)||theta||^2.
  double sample_value(std::size_t i, const Vector& theta) const;

  // g'(x_i^T theta): grad f_i(theta) = scalar_residual * x_i.
  double scalar_residual(std::size_t i, const Vector& theta) const;
  double derivative_at_margin(std::size_t i, double margin) const;
  double margin(std::size_t i, const Vector& theta) const;

  // Uniform per-sample Lipschitz constant of grad f_i.
  double smoothness_bound() const;

  // Serial reference versions of value/grad_full (no OpenMP).
  double value_serial(const Vector& theta) const;
  Vector grad_full_serial(const Vector& theta) const;

 private:
  void check_theta(const Vector& theta) const;
  void check_index(std::size_t i) const;
  kernels::Glm glm() const noexcept;

  LossKind kind_;
  std::shared_ptr<const Dataset> data_;
  double gamma_w_;
  double mu_shift_;
};

}  // namespace rscsaga
