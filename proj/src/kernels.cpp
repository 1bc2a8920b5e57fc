#include "rscsaga/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace rscsaga::kernels {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

constexpr Eigen::Index kColumnBlock = 256;

}  // namespace

double glm_value(Glm kind, double margin, double y) {
  switch (kind) {
    case Glm::Squared: {
      const double r = margin - y;
      return 0.5 * r * r;
    }
    case Glm::Logistic:
      return softplus(-y * margin);
  }
  return 0.0;
}

double glm_derivative(Glm kind, double margin, double y) {
  switch (kind) {
    case Glm::Squared:
      return margin - y;
    case Glm::Logistic:
      return -y * sigmoid(-y * margin);
  }
  return 0.0;
}

namespace serial {

void margins(const Matrix& X, const Vector& theta, Vector& out) {
  out.resize(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = X.row(i).dot(theta);
}

double mean_loss(const Matrix& X, const Vector& y, const Vector& theta, Glm kind) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) sum += glm_value(kind, X.row(i).dot(theta), y[i]);
  return sum / static_cast<double>(X.rows());
}

void mean_gradient(const Matrix& X, const Vector& y, const Vector& theta, Glm kind, Vector& out) {
  out = Vector::Zero(X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double d = glm_derivative(kind, X.row(i).dot(theta), y[i]);
    out += d * X.row(i).transpose();
  }
  out /= static_cast<double>(X.rows());
}

}  // namespace serial

namespace omp {

void margins(const Matrix& X, const Vector& theta, Vector& out) {
  out.resize(X.rows());
  const Eigen::Index n = X.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) out[i] = X.row(i).dot(theta);
}

double mean_loss(const Matrix& X, const Vector& y, const Vector& theta, Glm kind) {
  Vector u;
  margins(X, theta, u);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) sum += glm_value(kind, u[i], y[i]);
  return sum / static_cast<double>(X.rows());
}

void transpose_times(const Matrix& X, const Vector& d, Vector& out) {
  const Eigen::Index p = X.cols();
  const Eigen::Index n = X.rows();
  out = Vector::Zero(p);
  const Eigen::Index blocks = (p + kColumnBlock - 1) / kColumnBlock;
#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index lo = b * kColumnBlock;
    const Eigen::Index width = std::min(kColumnBlock, p - lo);
    auto acc = out.segment(lo, width);
    for (Eigen::Index i = 0; i < n; ++i) acc += d[i] * X.row(i).segment(lo, width).transpose();
  }
}

void mean_gradient(const Matrix& X, const Vector& y, const Vector& theta, Glm kind, Vector& out) {
  Vector d;
  margins(X, theta, d);
  const Eigen::Index n = X.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) d[i] = glm_derivative(kind, d[i], y[i]);
  transpose_times(X, d, out);
  out /= static_cast<double>(n);
}

}  // namespace omp

}  // namespace rscsaga::kernels
