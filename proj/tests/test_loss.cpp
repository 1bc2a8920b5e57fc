#include <cmath>
#include <random>

#include <doctest.h>

#include "helpers.hpp"
#include "rscsaga/loss.hpp"

using namespace rscsaga;

namespace {

Vector fd_gradient(const LossModel& m, const Vector& theta) {
  Vector g(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(theta[j]));
    Vector a = theta, b = theta;
    a[j] += h;
    b[j] -= h;
    g[j] = (m.value(a) - m.value(b)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("full gradient matches central finite differences") {
  std::mt19937_64 rng(1);
  struct Case {
    LossKind kind;
    bool classification;
    double gamma_w;
    double shift;
  };
  for (const Case c : {Case{LossKind::SquaredError, false, 0.0, 0.0}, Case{LossKind::SquaredError, false, 0.0, 0.3},
                       Case{LossKind::Logistic, true, 0.0, 0.0}, Case{LossKind::CorrectedQuadratic, false, 0.1, 0.35}}) {
    const auto data = testing::random_dataset(40, 12, 7, c.classification);
    const LossModel m(c.kind, data, c.gamma_w, c.shift);
    const Vector theta = testing::random_vector(12, rng, 0.5);
    CHECK(testing::rel_err(m.grad_full(theta), fd_gradient(m, theta)) <= 1e-7);
  }
}

TEST_CASE("normal-equations oracle: least-squares solution is stationary") {
  const auto data = testing::random_dataset(60, 8, 3);
  const LossModel m(LossKind::SquaredError, data);
  const Matrix& X = data->features();
  const Eigen::MatrixXd XtX = X.transpose() * X;
  const Vector theta_ls = XtX.ldlt().solve(X.transpose() * data->responses());
  CHECK(m.grad_full(theta_ls).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK(m.value(theta_ls) <= m.value(theta_ls + 1e-3 * Vector::Ones(8)));
}

TEST_CASE("mean of per-sample gradients is the full gradient") {
  std::mt19937_64 rng(2);
  for (LossKind kind : {LossKind::SquaredError, LossKind::Logistic}) {
    const auto data = testing::random_dataset(30, 9, 4, kind == LossKind::Logistic);
    const LossModel m(kind, data, 0.0, 0.2);
    const Vector theta = testing::random_vector(9, rng);
    Vector mean = Vector::Zero(9);
    double value = 0.0;
    for (std::size_t i = 0; i < 30; ++i) {
      mean += m.grad_sample(i, theta);
      value += m.sample_value(i, theta);
    }
    CHECK(testing::rel_err(mean / 30.0, m.grad_full(theta)) <= 1e-13);
    CHECK(value / 30.0 == doctest::Approx(m.value(theta)).epsilon(1e-13));
    // grad f_i = scalar_residual * x_i when unshifted.
    const LossModel plain = m.convex_part();
    const Vector g3 = plain.grad_sample(3, theta);
    CHECK(testing::rel_err(g3, plain.scalar_residual(3, theta) * data->row(3).transpose()) <= 1e-15);
  }
}

TEST_CASE("serial and OpenMP objective paths agree exactly") {
  const auto data = testing::random_dataset(120, 400, 8, true);
  std::mt19937_64 rng(3);
  const Vector theta = testing::random_vector(400, rng, 0.05);
  const LossModel m(LossKind::Logistic, data, 0.0, 0.1);
  CHECK(m.value(theta) == m.value_serial(theta));
  CHECK(m.grad_full(theta) == m.grad_full_serial(theta));
}

TEST_CASE("a single sample is its own mean, bit for bit") {
  const auto data = testing::random_dataset(1, 6, 9);
  std::mt19937_64 rng(4);
  const Vector theta = testing::random_vector(6, rng);
  const LossModel m(LossKind::SquaredError, data, 0.0, 0.25);
  CHECK(m.grad_sample(0, theta) == m.grad_full(theta));
}

TEST_CASE("smoothness bound") {
  Matrix X(2, 2);
  X << 3, 4, 1, 0;
  const auto data = std::make_shared<const Dataset>(X, Vector::Ones(2));
  CHECK(LossModel(LossKind::SquaredError, data).smoothness_bound() == 25.0);
  CHECK(LossModel(LossKind::Logistic, data).smoothness_bound() == 6.25);
}

TEST_CASE("loss model validation") {
  const auto data = testing::random_dataset(5, 3, 1);
  CHECK_THROWS_AS(LossModel(LossKind::CorrectedQuadratic, data, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(LossModel(LossKind::SquaredError, data, 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(LossModel(LossKind::SquaredError, nullptr), std::invalid_argument);
  const LossModel m(LossKind::SquaredError, data);
  CHECK_THROWS_AS(m.value(Vector::Zero(4)), std::invalid_argument);
  CHECK_THROWS_AS(m.grad_sample(5, Vector::Zero(3)), std::out_of_range);
  CHECK(to_string(LossKind::CorrectedQuadratic) == "corrected");
}
