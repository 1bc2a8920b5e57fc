#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

#include "rscsaga/dataset.hpp"

namespace rscsaga {

enum class SyntheticFamily { Lasso, GroupLasso, CorrectedLasso, ScadRegression };

std::string_view to_string(SyntheticFamily family);
SyntheticFamily parse_family(std::string_view name);

/// Parameters of the synthetic designs.
///
/// Lasso / ScadRegression use n, p, r; GroupLasso uses group_size (m) and
/// active_groups (s_G) with p = m * N_G; CorrectedLasso adds gamma_w.
struct SyntheticSpec {
  SyntheticFamily family = SyntheticFamily::Lasso;
  std::size_t n = 500;
  std::size_t p = 1000;
  std::size_t r = 25;
  std::size_t group_size = 10;
  std::size_t active_groups = 10;
  double equicorrelation = 0.0;  // b: Sigma_ii = 1, Sigma_ij = b
  double noise_std = 1.0;
  double gamma_w = 0.0;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct SyntheticProblem {
  std::shared_ptr<const Dataset> data;
  Vector theta_star;
  double gamma_w = 0.0;
};

// x_i ~ N(0, Sigma) equicorrelated, theta* with r entries +-1, y = X theta* + noise.
SyntheticProblem gen_lasso(const SyntheticSpec& spec);
// Contiguous groups of size m, s_G of them active with Uniform[-1, 1] entries.
SyntheticProblem gen_group_lasso(const SyntheticSpec& spec);
// x_i ~ N(0, I), observed z_i = x_i + w_i with w_i ~ N(0, gamma_w I); y uses x.
SyntheticProblem gen_corrected_lasso(const SyntheticSpec& spec);
// x_i ~ N(0, 2I), otherwise as gen_lasso.
SyntheticProblem gen_scad(const SyntheticSpec& spec);
// Dispatch on spec.family.
SyntheticProblem generate(const SyntheticSpec& spec);

// Scales column j by min(1, sqrt(n)/||X_j||_2); zero columns are left alone.
Dataset normalize_columns(const Dataset& ds);

// Feature j becomes the group {x_j, x_j^2, ..., x_j^degree} at columns
// degree*j .. degree*j + degree - 1.
Dataset poly_expand_grouped(const Dataset& ds, int degree = 3);

// First `rows` samples (all when rows >= n).
Dataset head_rows(const Dataset& ds, std::size_t rows);

}  // namespace rscsaga
