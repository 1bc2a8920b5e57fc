#include "rscsaga/experiment.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace rscsaga {

namespace {

struct Cell {
  std::size_t algorithm;  // index into cfg.algorithms
  double value;
  std::uint64_t seed;
};

Penalty make_penalty(const ExperimentConfig& cfg, const Dataset& data) {
  switch (cfg.penalty) {
    case PenaltyKind::L1:
      return Penalty::l1(cfg.lambda, cfg.rho);
    case PenaltyKind::GroupL2:
      if (!data.has_groups()) throw ConfigError("model.penalty", "group-l2 needs grouped data");
      return Penalty::group_l2(cfg.lambda, *data.groups(), cfg.rho);
    case PenaltyKind::SCAD:
      return Penalty::scad(cfg.lambda, cfg.zeta, cfg.rho);
    case PenaltyKind::MCP:
      return Penalty::mcp(cfg.lambda, cfg.mcp_b, cfg.rho);
  }
  throw ConfigError("model.penalty", "unknown penalty");
}

std::shared_ptr<const Dataset> load_file_data(const ExperimentConfig& cfg) {
  const LabelMapping labels = cfg.loss == LossKind::Logistic ? LabelMapping::PlusMinus : cfg.labels;
  Dataset ds = head_rows(load_libsvm(cfg.data_path, std::nullopt, labels), cfg.max_rows);
  if (cfg.poly_degree > 0) ds = poly_expand_grouped(ds, cfg.poly_degree);
  if (cfg.normalize) ds = normalize_columns(ds);
  if (cfg.group_size > 0 && cfg.poly_degree == 0) {
    if (ds.p() % cfg.group_size != 0) {
      throw ConfigError("model.group_size", fmt::format("must divide p = {}", ds.p()));
    }
    ds = Dataset(ds.features(), ds.responses(), contiguous_groups(ds.p(), cfg.group_size), ds.column_normalized());
  }
  return std::make_shared<const Dataset>(std::move(ds));
}

RunConfig run_config(const ExperimentConfig& cfg, double value, std::uint64_t seed) {
  RunConfig rc;
  rc.step = value;
  rc.passes = cfg.passes;
  rc.seed = seed;
  rc.trace_every = cfg.trace_every;
  rc.table_mode = cfg.table_mode;
  rc.svrg_inner_m = cfg.svrg_inner_m;
  rc.record_time = cfg.record_time;
  return rc;
}

const std::vector<double>& grid_for(const ExperimentConfig& cfg, Algorithm a) {
  return uses_constant_step(a) ? cfg.step_grid : cfg.schedule_grid;
}

std::string_view hyper_name(Algorithm a) {
  switch (a) {
    case Algorithm::ProxSGD:
      return "eta0";
    case Algorithm::RDA:
      return "beta0";
    default:
      return "step";
  }
}

// Runs the cells in parallel; each cell owns its solver state.
std::vector<SolverTrace> run_cells(const ExperimentConfig& cfg, const Problem& problem,
                                   const std::vector<Cell>& cells) {
  std::vector<SolverTrace> out(cells.size());
  std::exception_ptr error;
  const auto count = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const Cell& cell = cells[static_cast<std::size_t>(k)];
    try {
      out[static_cast<std::size_t>(k)] = run_solver(cfg.algorithms[cell.algorithm], problem.model, problem.penalty,
                                                    run_config(cfg, cell.value, cell.seed));
    } catch (...) {
#pragma omp critical(rscsaga_cell_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

Problem build_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  std::shared_ptr<const Dataset> data;
  Vector theta_star;
  double gamma_w = 0.0;
  if (cfg.source == DataSource::Synthetic) {
    SyntheticProblem sp = generate(cfg.synthetic);
    data = std::move(sp.data);
    theta_star = std::move(sp.theta_star);
    gamma_w = sp.gamma_w;
  } else {
    data = load_file_data(cfg);
  }
  Penalty pen = make_penalty(cfg, *data);
  LossModel model = make_model(cfg.loss, data, pen, gamma_w);
  return Problem{std::move(data), std::move(theta_star), std::move(pen), std::move(model)};
}

double final_gap(const SolverTrace& trace, double g_hat) {
  if (trace.status == RunStatus::Diverged || trace.records.empty()) return std::numeric_limits<double>::infinity();
  return std::max(trace.records.back().objective - g_hat, kGapFloor);
}

std::optional<std::size_t> select_best(const std::vector<double>& grid, const std::vector<double>& final_gaps) {
  if (grid.size() != final_gaps.size()) throw std::invalid_argument("grid and gap counts differ");
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(final_gaps[i])) continue;
    if (!best || final_gaps[i] < final_gaps[*best] ||
        (final_gaps[i] == final_gaps[*best] && grid[i] > grid[*best])) {
      best = i;
    }
  }
  return best;
}

void emit_csv(const SolverTrace& trace, const std::filesystem::path& path, std::optional<double> g_hat) {
  std::string buf = g_hat ? "pass,seconds,objective,gap\n" : "pass,seconds,objective\n";
  if (g_hat) {
    const std::vector<GapPoint> gaps = gap_trace(trace, *g_hat);
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      const TraceRecord& r = trace.records[i];
      fmt::format_to(std::back_inserter(buf), "{:.17g},{:.17g},{:.17g},{:.17g}\n", r.pass, r.seconds, r.objective,
                     gaps[i].gap);
    }
  } else {
    for (const TraceRecord& r : trace.records)
      fmt::format_to(std::back_inserter(buf), "{:.17g},{:.17g},{:.17g}\n", r.pass, r.seconds, r.objective);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << buf;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, const ReferenceOptions& reference) {
  const Problem problem = build_problem(cfg);
  ReferenceOptions ref_opts = reference;
  ref_opts.budget = cfg.reference_budget;
  ref_opts.tolerance = cfg.reference_tolerance;

  ExperimentSummary summary;
  summary.reference = reference_solution(problem.model, problem.penalty, ref_opts);
  const double g_hat = summary.reference.objective;

  // Tuning on the first seed.
  std::vector<Cell> tuning;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
    for (double v : grid_for(cfg, cfg.algorithms[a])) tuning.push_back({a, v, cfg.seeds.front()});
  const std::vector<SolverTrace> tuned = run_cells(cfg, problem, tuning);

  std::vector<Cell> reruns;
  std::vector<std::size_t> best_cell(cfg.algorithms.size(), tuning.size());
  std::size_t offset = 0;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    const Algorithm alg = cfg.algorithms[a];
    const std::vector<double>& grid = grid_for(cfg, alg);
    std::vector<double> gaps;
    for (std::size_t i = 0; i < grid.size(); ++i) gaps.push_back(final_gap(tuned[offset + i], g_hat));
    AlgorithmSummary as{alg, std::string(hyper_name(alg)), std::nullopt, {}};
    if (const auto best = select_best(grid, gaps)) {
      as.chosen = grid[*best];
      best_cell[a] = offset + *best;
      for (std::size_t s = 1; s < cfg.seeds.size(); ++s) reruns.push_back({a, grid[*best], cfg.seeds[s]});
    } else {
      summary.any_failed = true;
      // Keep the largest-value run so the failure is visible in the output.
      as.traces.push_back(tuned[offset]);
    }
    summary.algorithms.push_back(std::move(as));
    offset += grid.size();
  }
  const std::vector<SolverTrace> rerun = run_cells(cfg, problem, reruns);
  std::size_t next = 0;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    AlgorithmSummary& as = summary.algorithms[a];
    if (!as.chosen) continue;
    as.traces.push_back(tuned[best_cell[a]]);
    for (std::size_t s = 1; s < cfg.seeds.size(); ++s) as.traces.push_back(rerun[next++]);
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.output_dir.string() + "': " + ec.message());
  std::string table = "algorithm,hyperparameter,value,seed,status,final_pass,final_objective,final_gap\n";
  for (const AlgorithmSummary& as : summary.algorithms) {
    for (const SolverTrace& trace : as.traces) {
      const auto path = cfg.output_dir / fmt::format("{}_seed{}.csv", to_string(as.algorithm), trace.seed);
      emit_csv(trace, path, g_hat);
      summary.files.push_back(path);
      const double value = trace.hyperparameters.empty() ? 0.0 : trace.hyperparameters.front().second;
      const bool have = !trace.records.empty();
      table += fmt::format("{},{},{},{},{},{},{},{}\n", to_string(as.algorithm), as.hyperparameter,
                           format_real(value), trace.seed, to_string(trace.status),
                           have ? format_real(trace.records.back().pass) : "",
                           have ? format_real(trace.records.back().objective) : "",
                           format_real(final_gap(trace, g_hat)));
    }
  }
  const auto summary_path = cfg.output_dir / "summary.csv";
  std::ofstream out(summary_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + summary_path.string() + "' for writing");
  out << table;
  out.flush();
  if (!out) throw IoError("write failed for '" + summary_path.string() + "'");
  summary.files.push_back(summary_path);
  return summary;
}

}  // namespace rscsaga
