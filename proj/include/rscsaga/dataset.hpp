#pragma once

#include <optional>

#include "rscsaga/types.hpp"

namespace rscsaga {

/// Design matrix X (n x p, row-major), responses y and an optional group partition.
///
/// Immutable after construction; share it between models and threads through
/// std::shared_ptr<const Dataset>.
class Dataset {
 public:
  Dataset(Matrix features, Vector responses, std::optional<Groups> groups = std::nullopt,
          bool column_normalized = false);

  std::size_t n() const noexcept { return static_cast<std::size_t>(features_.rows()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(features_.cols()); }

  const Matrix& features() const noexcept { return features_; }
  const Vector& responses() const noexcept { return responses_; }
  auto row(std::size_t i) const { return features_.row(static_cast<Eigen::Index>(i)); }
  double response(std::size_t i) const { return responses_[static_cast<Eigen::Index>(i)]; }

  bool has_groups() const noexcept { return groups_.has_value(); }
  const std::optional<Groups>& groups() const noexcept { return groups_; }
  bool column_normalized() const noexcept { return column_normalized_; }

 private:
  Matrix features_;
  Vector responses_;
  std::optional<Groups> groups_;
  bool column_normalized_;
};

// Throws std::invalid_argument unless the groups are disjoint and every index is < p.
void validate_groups(const Groups& groups, std::size_t p);

// Contiguous groups {0..m-1}, {m..2m-1}, ...; p must be a multiple of m.
Groups contiguous_groups(std::size_t p, std::size_t group_size);

}  // namespace rscsaga
