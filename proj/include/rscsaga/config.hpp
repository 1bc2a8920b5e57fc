#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rscsaga/datagen.hpp"
#include "rscsaga/libsvm.hpp"
#include "rscsaga/solver_common.hpp"

namespace rscsaga {

// Invalid or missing setting; field() is the dotted key, e.g. "problem.n".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what, std::size_t line = 0);
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

enum class DataSource { Synthetic, LibSvm };

struct ExperimentConfig {
  std::string name = "experiment";

  // problem.*
  DataSource source = DataSource::Synthetic;
  SyntheticSpec synthetic;
  std::filesystem::path data_path;
  LabelMapping labels = LabelMapping::Raw;
  std::size_t max_rows = 0;  // 0: all rows
  int poly_degree = 0;       // > 0: grouped polynomial expansion
  bool normalize = false;

  // model.*
  LossKind loss = LossKind::SquaredError;
  PenaltyKind penalty = PenaltyKind::L1;
  double lambda = 0.05;
  double rho = Penalty::kInf;
  double zeta = 3.7;
  double mcp_b = 3.0;
  std::size_t group_size = 0;  // libsvm data without poly expansion; 0: none

  // run.*
  std::vector<Algorithm> algorithms;
  std::vector<double> step_grid;      // constant-step methods
  std::vector<double> schedule_grid;  // eta0 for Prox-SGD, beta0 for RDA
  std::size_t passes = 100;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "results";
  std::size_t trace_every = 0;
  TableMode table_mode = TableMode::Scalars;
  std::size_t svrg_inner_m = 0;
  bool record_time = true;

  // reference.*
  std::size_t reference_budget = 200000;
  double reference_tolerance = 1e-12;

  // Throws ConfigError on the first invalid field.
  void validate() const;
};

// {2, 2/2, ..., 2/2^12}.
std::vector<double> default_step_grid();
// {1e-3, 1e-2, ..., 1e2}.
std::vector<double> default_schedule_grid();

// Line-oriented "key = value" with dotted keys; "[section]" lines prefix the
// keys that follow; '#' starts a comment. Lists are comma separated.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
// Inverse of parse_config.
std::string format_config(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
// Throws ConfigError("preset", ...) for unknown names.
ExperimentConfig preset(std::string_view name);

}  // namespace rscsaga
