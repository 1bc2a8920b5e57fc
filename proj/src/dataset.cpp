#include "rscsaga/dataset.hpp"

#include <cmath>

namespace rscsaga {

void validate_groups(const Groups& groups, std::size_t p) {
  std::vector<bool> seen(p, false);
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("group must not be empty");
    for (std::size_t j : g) {
      if (j >= p) throw std::invalid_argument("group index " + std::to_string(j) + " out of range");
      if (seen[j]) throw std::invalid_argument("groups overlap at index " + std::to_string(j));
      seen[j] = true;
    }
  }
}

Groups contiguous_groups(std::size_t p, std::size_t group_size) {
  if (group_size == 0 || p % group_size != 0) {
    throw std::invalid_argument("p must be a positive multiple of the group size");
  }
  Groups out(p / group_size);
  for (std::size_t g = 0; g < out.size(); ++g) {
    out[g].resize(group_size);
    for (std::size_t k = 0; k < group_size; ++k) out[g][k] = g * group_size + k;
  }
  return out;
}

Dataset::Dataset(Matrix features, Vector responses, std::optional<Groups> groups,
                 bool column_normalized)
    : features_(std::move(features)),
      responses_(std::move(responses)),
      groups_(std::move(groups)),
      column_normalized_(column_normalized) {
  if (features_.rows() < 1 || features_.cols() < 1) {
    throw std::invalid_argument("dataset needs n >= 1 and p >= 1");
  }
  if (responses_.size() != features_.rows()) {
    throw std::invalid_argument("responses length does not match number of rows");
  }
  if (!features_.allFinite() || !responses_.allFinite()) {
    throw std::invalid_argument("dataset contains non-finite values");
  }
  if (groups_) validate_groups(*groups_, p());
  if (column_normalized_) {
    const double sqrt_n = std::sqrt(static_cast<double>(n()));
    for (Eigen::Index j = 0; j < features_.cols(); ++j) {
      if (features_.col(j).norm() / sqrt_n > 1.0 + 1e-9) {
        throw std::invalid_argument("column " + std::to_string(j) +
                                    " violates the column-normalization flag");
      }
    }
  }
}

}  // namespace rscsaga
