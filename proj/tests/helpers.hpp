#pragma once

#include <memory>
#include <optional>
#include <random>

#include "rscsaga/dataset.hpp"

namespace testing {

using rscsaga::Dataset;
using rscsaga::Matrix;
using rscsaga::Vector;

inline Vector random_vector(Eigen::Index p, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(p);
  for (Eigen::Index j = 0; j < p; ++j) v[j] = normal(rng);
  return v;
}

// Gaussian design; labels are +-1 when `classification`.
inline std::shared_ptr<const Dataset> random_dataset(std::size_t n, std::size_t p, std::uint64_t seed,
                                                     bool classification = false,
                                                     std::optional<rscsaga::Groups> groups = std::nullopt) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = normal(rng);
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double v = normal(rng);
    y[i] = classification ? (v > 0 ? 1.0 : -1.0) : v;
  }
  return std::make_shared<const Dataset>(std::move(X), std::move(y), std::move(groups));
}

inline double rel_err(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace testing
