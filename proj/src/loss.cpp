#include "rscsaga/loss.hpp"

#include <cmath>
#include <string>

namespace rscsaga {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::SquaredError:
      return "squared";
    case LossKind::Logistic:
      return "logistic";
    case LossKind::CorrectedQuadratic:
      return "corrected";
  }
  return "?";
}

LossModel::LossModel(LossKind kind, std::shared_ptr<const Dataset> data, double gamma_w,
                     double mu_shift)
    : kind_(kind), data_(std::move(data)), gamma_w_(gamma_w), mu_shift_(mu_shift) {
  if (!data_) throw std::invalid_argument("loss model needs a dataset");
  if (!(gamma_w_ >= 0.0) || !(mu_shift_ >= 0.0) || !std::isfinite(gamma_w_) ||
      !std::isfinite(mu_shift_)) {
    throw std::invalid_argument("gamma_w and mu_shift must be finite and non-negative");
  }
  if (kind_ == LossKind::CorrectedQuadratic && !(gamma_w_ > 0.0)) {
    throw std::invalid_argument("corrected quadratic loss requires gamma_w > 0");
  }
}

LossModel LossModel::with_mu_shift(double mu_shift) const {
  return LossModel(kind_, data_, gamma_w_, mu_shift);
}

kernels::Glm LossModel::glm() const noexcept {
  return kind_ == LossKind::Logistic ? kernels::Glm::Logistic : kernels::Glm::Squared;
}

void LossModel::check_theta(const Vector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != p()) {
    throw std::invalid_argument("theta has length " + std::to_string(theta.size()) +
                                ", expected " + std::to_string(p()));
  }
  if (!theta.allFinite()) throw std::invalid_argument("theta is not finite");
}

void LossModel::check_index(std::size_t i) const {
  if (i >= n()) throw std::out_of_range("sample index " + std::to_string(i) + " out of range");
}

double LossModel::value(const Vector& theta) const {
  check_theta(theta);
  double v = kernels::omp::mean_loss(data_->features(), data_->responses(), theta, glm());
  if (mu_shift_ != 0.0) v -= 0.5 * mu_shift_ * theta.squaredNorm();
  return v;
}

double LossModel::value_serial(const Vector& theta) const {
  check_theta(theta);
  double v = kernels::serial::mean_loss(data_->features(), data_->responses(), theta, glm());
  if (mu_shift_ != 0.0) v -= 0.5 * mu_shift_ * theta.squaredNorm();
  return v;
}

void LossModel::grad_full_into(const Vector& theta, Vector& out) const {
  check_theta(theta);
  kernels::omp::mean_gradient(data_->features(), data_->responses(), theta, glm(), out);
  if (mu_shift_ != 0.0) out -= mu_shift_ * theta;
}

Vector LossModel::grad_full(const Vector& theta) const {
  Vector out;
  grad_full_into(theta, out);
  return out;
}

Vector LossModel::grad_full_serial(const Vector& theta) const {
  check_theta(theta);
  Vector out;
  kernels::serial::mean_gradient(data_->features(), data_->responses(), theta, glm(), out);
  if (mu_shift_ != 0.0) out -= mu_shift_ * theta;
  return out;
}

double LossModel::margin(std::size_t i, const Vector& theta) const {
  return data_->row(i).dot(theta);
}

double LossModel::derivative_at_margin(std::size_t i, double margin) const {
  check_index(i);
  return kernels::glm_derivative(glm(), margin, data_->response(i));
}

double LossModel::scalar_residual(std::size_t i, const Vector& theta) const {
  check_index(i);
  return kernels::glm_derivative(glm(), margin(i, theta), data_->response(i));
}

void LossModel::grad_sample_into(std::size_t i, const Vector& theta, Vector& out) const {
  const double d = scalar_residual(i, theta);
  // Same operation order as the full-gradient kernel for n = 1.
  out = Vector::Zero(theta.size());
  out += d * data_->row(i).transpose();
  if (mu_shift_ != 0.0) out -= mu_shift_ * theta;
}

Vector LossModel::grad_sample(std::size_t i, const Vector& theta) const {
  Vector out;
  grad_sample_into(i, theta, out);
  return out;
}

double LossModel::sample_value(std::size_t i, const Vector& theta) const {
  check_index(i);
  double v = kernels::glm_value(glm(), margin(i, theta), data_->response(i));
  if (mu_shift_ != 0.0) v -= 0.5 * mu_shift_ * theta.squaredNorm();
  return v;
}

double LossModel::smoothness_bound() const {
  const double max_row = data_->features().rowwise().squaredNorm().maxCoeff();
  return kind_ == LossKind::Logistic ? max_row / 4.0 : max_row;
}

}  // namespace rscsaga
