#include "rscsaga/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace rscsaga {

namespace {

using Rng = std::mt19937_64;

// Uniformly chosen support via a seeded shuffle of {0..p-1}.
std::vector<std::size_t> random_support(Rng& rng, std::size_t p, std::size_t k) {
  std::vector<std::size_t> idx(p);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Vector sparse_sign_vector(Rng& rng, std::size_t p, std::size_t r) {
  Vector theta = Vector::Zero(static_cast<Eigen::Index>(p));
  std::bernoulli_distribution coin(0.5);
  for (std::size_t j : random_support(rng, p, r)) theta[static_cast<Eigen::Index>(j)] = coin(rng) ? 1.0 : -1.0;
  return theta;
}

// Rows x = scale * (sqrt(1-b) g + sqrt(b) z 1): covariance scale^2 * equicorrelated(b).
Matrix gaussian_design(Rng& rng, std::size_t n, std::size_t p, double b, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  const double a = std::sqrt(1.0 - b);
  const double c = std::sqrt(b);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double z = normal(rng);
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = scale * (a * normal(rng) + c * z);
  }
  return X;
}

Vector responses(Rng& rng, const Matrix& X, const Vector& theta_star, double noise_std) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector y = X * theta_star;
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += noise_std * normal(rng);
  return y;
}

SyntheticProblem sparse_linear(const SyntheticSpec& spec, double scale, double b) {
  Rng rng(spec.seed);
  Vector theta_star = sparse_sign_vector(rng, spec.p, spec.r);
  Matrix X = gaussian_design(rng, spec.n, spec.p, b, scale);
  Vector y = responses(rng, X, theta_star, spec.noise_std);
  SyntheticProblem out;
  out.data = std::make_shared<const Dataset>(std::move(X), std::move(y));
  out.theta_star = std::move(theta_star);
  return out;
}

void require(bool ok, const char* field, const std::string& why) {
  if (!ok) throw std::invalid_argument(std::string(field) + ": " + why);
}

}  // namespace

std::string_view to_string(SyntheticFamily family) {
  switch (family) {
    case SyntheticFamily::Lasso:
      return "lasso";
    case SyntheticFamily::GroupLasso:
      return "group-lasso";
    case SyntheticFamily::CorrectedLasso:
      return "corrected-lasso";
    case SyntheticFamily::ScadRegression:
      return "scad";
  }
  return "?";
}

SyntheticFamily parse_family(std::string_view name) {
  for (SyntheticFamily f : {SyntheticFamily::Lasso, SyntheticFamily::GroupLasso,
                            SyntheticFamily::CorrectedLasso, SyntheticFamily::ScadRegression}) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown synthetic family '" + std::string(name) + "'");
}

void SyntheticSpec::validate() const {
  require(n >= 1, "n", "must be >= 1");
  require(p >= 1, "p", "must be >= 1");
  require(equicorrelation >= 0.0 && equicorrelation < 1.0, "equicorrelation", "must lie in [0, 1)");
  require(noise_std >= 0.0 && std::isfinite(noise_std), "noise_std", "must be >= 0");
  require(gamma_w >= 0.0 && std::isfinite(gamma_w), "gamma_w", "must be >= 0");
  if (family == SyntheticFamily::GroupLasso) {
    require(group_size >= 1 && p % group_size == 0, "group_size", "must divide p");
    require(active_groups <= p / group_size, "active_groups", "must not exceed the number of groups");
  } else {
    require(r <= p, "r", "must not exceed p");
  }
}

SyntheticProblem gen_lasso(const SyntheticSpec& spec) {
  if (spec.family != SyntheticFamily::Lasso) throw std::invalid_argument("family: expected lasso");
  spec.validate();
  return sparse_linear(spec, 1.0, spec.equicorrelation);
}

SyntheticProblem gen_scad(const SyntheticSpec& spec) {
  if (spec.family != SyntheticFamily::ScadRegression) throw std::invalid_argument("family: expected scad");
  spec.validate();
  return sparse_linear(spec, std::sqrt(2.0), 0.0);
}

SyntheticProblem gen_group_lasso(const SyntheticSpec& spec) {
  if (spec.family != SyntheticFamily::GroupLasso) throw std::invalid_argument("family: expected group-lasso");
  spec.validate();
  Rng rng(spec.seed);
  Groups groups = contiguous_groups(spec.p, spec.group_size);
  Vector theta_star = Vector::Zero(static_cast<Eigen::Index>(spec.p));
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t g : random_support(rng, groups.size(), spec.active_groups)) {
    for (std::size_t j : groups[g]) theta_star[static_cast<Eigen::Index>(j)] = unif(rng);
  }
  Matrix X = gaussian_design(rng, spec.n, spec.p, spec.equicorrelation, 1.0);
  Vector y = responses(rng, X, theta_star, spec.noise_std);
  SyntheticProblem out;
  out.data = std::make_shared<const Dataset>(std::move(X), std::move(y), std::move(groups));
  out.theta_star = std::move(theta_star);
  return out;
}

SyntheticProblem gen_corrected_lasso(const SyntheticSpec& spec) {
  if (spec.family != SyntheticFamily::CorrectedLasso) {
    throw std::invalid_argument("family: expected corrected-lasso");
  }
  spec.validate();
  Rng rng(spec.seed);
  Vector theta_star = sparse_sign_vector(rng, spec.p, spec.r);
  Matrix X = gaussian_design(rng, spec.n, spec.p, 0.0, 1.0);
  Vector y = responses(rng, X, theta_star, spec.noise_std);
  // Corruption is drawn last so gamma_w = 0 reproduces gen_lasso(b = 0) exactly.
  if (spec.gamma_w > 0.0) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double s = std::sqrt(spec.gamma_w);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) += s * normal(rng);
  }
  SyntheticProblem out;
  out.data = std::make_shared<const Dataset>(std::move(X), std::move(y));
  out.theta_star = std::move(theta_star);
  out.gamma_w = spec.gamma_w;
  return out;
}

SyntheticProblem generate(const SyntheticSpec& spec) {
  switch (spec.family) {
    case SyntheticFamily::Lasso:
      return gen_lasso(spec);
    case SyntheticFamily::GroupLasso:
      return gen_group_lasso(spec);
    case SyntheticFamily::CorrectedLasso:
      return gen_corrected_lasso(spec);
    case SyntheticFamily::ScadRegression:
      return gen_scad(spec);
  }
  throw std::invalid_argument("unknown family");
}

Dataset normalize_columns(const Dataset& ds) {
  Matrix X = ds.features();
  const double sqrt_n = std::sqrt(static_cast<double>(ds.n()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double norm = X.col(j).norm();
    if (norm == 0.0) continue;
    X.col(j) *= std::min(1.0, sqrt_n / norm);
    // Rounding can leave the scaled norm a hair above sqrt(n).
    const double after = X.col(j).norm();
    if (after > sqrt_n) X.col(j) *= sqrt_n / after * (1.0 - 1e-15);
  }
  return Dataset(std::move(X), ds.responses(), ds.groups(), true);
}

Dataset poly_expand_grouped(const Dataset& ds, int degree) {
  if (degree < 1) throw std::invalid_argument("degree must be >= 1");
  const auto d = static_cast<Eigen::Index>(degree);
  const Matrix& X = ds.features();
  Matrix out(X.rows(), X.cols() * d);
  Groups groups(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const Eigen::Index col = d * j + k;
      out.col(col) = X.col(j).array().pow(static_cast<double>(k + 1));
      groups[static_cast<std::size_t>(j)].push_back(static_cast<std::size_t>(col));
    }
  }
  // Exact powers for degree 2 and 3 (pow() is not guaranteed to be).
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (d >= 2) out.col(d * j + 1) = X.col(j).array() * X.col(j).array();
    if (d >= 3) out.col(d * j + 2) = X.col(j).array() * X.col(j).array() * X.col(j).array();
  }
  return Dataset(std::move(out), ds.responses(), std::move(groups), false);
}

Dataset head_rows(const Dataset& ds, std::size_t rows) {
  if (rows == 0 || rows >= ds.n()) return ds;
  const auto r = static_cast<Eigen::Index>(rows);
  return Dataset(ds.features().topRows(r), ds.responses().head(r), ds.groups(), false);
}

}  // namespace rscsaga
