// rsc_saga: experiment harness for SAGA and the proximal baselines.
//
// Exit codes: 0 ok, 1 config error, 2 runtime error or divergence, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rscsaga/experiment.hpp"
#include "rscsaga/libsvm.hpp"

namespace {

using namespace rscsaga;

enum Exit { kOk = 0, kConfig = 1, kRuntime = 2, kIo = 3 };

struct Source {
  std::string config;
  std::string preset_name;
  std::string data;

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = config.empty() ? preset(preset_name) : load_config(config);
    if (!data.empty()) cfg.data_path = data;
    return cfg;
  }
};

void add_source(CLI::App* cmd, Source& src, bool data_option) {
  auto* group = cmd->add_option_group("source");
  group->add_option("--config", src.config, "Config file")->check(CLI::ExistingFile);
  group->add_option("--preset", src.preset_name, "Named preset (see list-presets)");
  group->require_option(1);
  if (data_option) cmd->add_option("--data", src.data, "libsvm file overriding problem.path");
}

int run(const Source& src, bool no_timing, const std::string& out) {
  ExperimentConfig cfg = src.resolve();
  if (no_timing) cfg.record_time = false;
  if (!out.empty()) cfg.output_dir = out;
  const ExperimentSummary summary = run_experiment(cfg);
  fmt::print("reference: G = {:.17g}, residual {:.3g}, {}{}\n", summary.reference.objective,
             summary.reference.residual, to_string(summary.reference.status),
             summary.reference.from_cache ? " (cached)" : "");
  for (const AlgorithmSummary& as : summary.algorithms) {
    if (as.chosen) {
      const double gap = final_gap(as.traces.front(), summary.reference.objective);
      fmt::print("{:<10} {}={:<12.6g} final gap (seed {}) {:.3e}\n", to_string(as.algorithm), as.hyperparameter,
                 *as.chosen, as.traces.front().seed, gap);
    } else {
      fmt::print("{:<10} diverged at every grid value\n", to_string(as.algorithm));
    }
  }
  fmt::print("wrote {} files to {}\n", summary.files.size(), cfg.output_dir.string());
  return summary.any_failed ? kRuntime : kOk;
}

int reference(const Source& src) {
  const ExperimentConfig cfg = src.resolve();
  const Problem problem = build_problem(cfg);
  ReferenceOptions opts;
  opts.budget = cfg.reference_budget;
  opts.tolerance = cfg.reference_tolerance;
  const ReferenceResult r = reference_solution(problem.model, problem.penalty, opts);
  fmt::print("objective {:.17g}\nresidual {:.3g}\nstatus {}\niterations {}\ncache {}{}\n", r.objective, r.residual,
             to_string(r.status), r.iterations,
             (default_cache_dir() / fmt::format("{:016x}.ref", reference_key(problem.model, problem.penalty, opts)))
                 .string(),
             r.from_cache ? " (hit)" : "");
  return r.status == RunStatus::Converged ? kOk : kRuntime;
}

int gen_data(const Source& src, const std::string& out, const std::string& format) {
  const ExperimentConfig cfg = src.resolve();
  if (cfg.source != DataSource::Synthetic) throw ConfigError("problem.source", "gen-data needs synthetic data");
  const SyntheticProblem sp = generate(cfg.synthetic);
  if (format == "csv") {
    write_csv_dump(*sp.data, out);
  } else {
    write_libsvm(*sp.data, out);
  }
  fmt::print("wrote {} x {} {} data to {}\n", sp.data->n(), sp.data->p(), to_string(cfg.synthetic.family), out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAGA and proximal baselines on sparse estimation problems"};
  app.require_subcommand(1);

  Source run_src;
  bool no_timing = false;
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "Tune, run and write CSV traces");
  add_source(run_cmd, run_src, true);
  run_cmd->add_flag("--no-timing", no_timing, "Zero the seconds column");
  run_cmd->add_option("--out", run_out, "Output directory overriding run.output_dir");

  app.add_subcommand("list-presets", "Print the preset names");

  std::string shown;
  auto* show_cmd = app.add_subcommand("show-preset", "Print a preset as a config file");
  show_cmd->add_option("name", shown, "Preset name")->required();

  Source gen_src;
  std::string gen_out;
  std::string gen_format = "libsvm";
  auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic dataset");
  auto* gen_group = gen_cmd->add_option_group("source");
  gen_group->add_option("--spec", gen_src.config, "Config file with problem.* keys")->check(CLI::ExistingFile);
  gen_group->add_option("--preset", gen_src.preset_name, "Named preset");
  gen_group->require_option(1);
  gen_cmd->add_option("--out", gen_out, "Output file")->required();
  gen_cmd->add_option("--format", gen_format, "libsvm or csv")->check(CLI::IsMember({"libsvm", "csv"}));

  Source ref_src;
  auto* ref_cmd = app.add_subcommand("reference", "Compute and cache the reference solution");
  add_source(ref_cmd, ref_src, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run_cmd) return run(run_src, no_timing, run_out);
    if (*ref_cmd) return reference(ref_src);
    if (*gen_cmd) return gen_data(gen_src, gen_out, gen_format);
    if (*show_cmd) {
      std::cout << format_config(preset(shown));
      return kOk;
    }
    for (const std::string& name : preset_names()) std::cout << name << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kIo;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
