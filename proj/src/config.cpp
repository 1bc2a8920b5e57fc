#include "rscsaga/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace rscsaga {

ConfigError::ConfigError(std::string field, const std::string& what, std::size_t line)
    : std::runtime_error(line > 0 ? fmt::format("{}: {} (line {})", field, what, line)
                                  : fmt::format("{}: {}", field, what)),
      field_(std::move(field)),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

struct Field {
  const std::string& key;
  std::size_t line;

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(key, what, line); }

  double real(std::string_view v) const {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || std::isnan(x)) {
      fail(fmt::format("expected a number, got '{}'", v));
    }
    return x;
  }

  std::uint64_t integer(std::string_view v) const {
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      fail(fmt::format("expected a non-negative integer, got '{}'", v));
    }
    return x;
  }

  bool boolean(std::string_view v) const {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(fmt::format("expected true or false, got '{}'", v));
  }

  template <class Parse>
  auto guarded(Parse&& parse, std::string_view v) const {
    try {
      return parse(v);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
};

LossKind parse_loss(std::string_view v) {
  for (LossKind k : {LossKind::SquaredError, LossKind::Logistic, LossKind::CorrectedQuadratic})
    if (to_string(k) == v) return k;
  throw std::invalid_argument(fmt::format("unknown loss '{}'", v));
}

PenaltyKind parse_penalty(std::string_view v) {
  for (PenaltyKind k : {PenaltyKind::L1, PenaltyKind::GroupL2, PenaltyKind::SCAD, PenaltyKind::MCP})
    if (to_string(k) == v) return k;
  throw std::invalid_argument(fmt::format("unknown penalty '{}'", v));
}

std::string_view to_string(DataSource s) { return s == DataSource::Synthetic ? "synthetic" : "libsvm"; }
std::string_view to_string(LabelMapping m) { return m == LabelMapping::Raw ? "raw" : "pm1"; }
std::string_view to_string(TableMode m) { return m == TableMode::Scalars ? "scalars" : "vectors"; }

using Setter = std::function<void(ExperimentConfig&, std::string_view, const Field&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"name", [](auto& c, auto v, auto&) { c.name = std::string(v); }},
      {"problem.source",
       [](auto& c, auto v, auto& f) {
         if (v == "synthetic") c.source = DataSource::Synthetic;
         else if (v == "libsvm") c.source = DataSource::LibSvm;
         else f.fail(fmt::format("expected synthetic or libsvm, got '{}'", v));
       }},
      {"problem.family", [](auto& c, auto v, auto& f) { c.synthetic.family = f.guarded(parse_family, v); }},
      {"problem.n", [](auto& c, auto v, auto& f) { c.synthetic.n = f.integer(v); }},
      {"problem.p", [](auto& c, auto v, auto& f) { c.synthetic.p = f.integer(v); }},
      {"problem.r", [](auto& c, auto v, auto& f) { c.synthetic.r = f.integer(v); }},
      {"problem.group_size", [](auto& c, auto v, auto& f) { c.synthetic.group_size = f.integer(v); }},
      {"problem.active_groups", [](auto& c, auto v, auto& f) { c.synthetic.active_groups = f.integer(v); }},
      {"problem.equicorrelation", [](auto& c, auto v, auto& f) { c.synthetic.equicorrelation = f.real(v); }},
      {"problem.noise_std", [](auto& c, auto v, auto& f) { c.synthetic.noise_std = f.real(v); }},
      {"problem.gamma_w", [](auto& c, auto v, auto& f) { c.synthetic.gamma_w = f.real(v); }},
      {"problem.seed", [](auto& c, auto v, auto& f) { c.synthetic.seed = f.integer(v); }},
      {"problem.path", [](auto& c, auto v, auto&) { c.data_path = std::string(v); }},
      {"problem.labels",
       [](auto& c, auto v, auto& f) {
         if (v == "raw") c.labels = LabelMapping::Raw;
         else if (v == "pm1") c.labels = LabelMapping::PlusMinus;
         else f.fail(fmt::format("expected raw or pm1, got '{}'", v));
       }},
      {"problem.max_rows", [](auto& c, auto v, auto& f) { c.max_rows = f.integer(v); }},
      {"problem.poly_degree", [](auto& c, auto v, auto& f) { c.poly_degree = static_cast<int>(f.integer(v)); }},
      {"problem.normalize", [](auto& c, auto v, auto& f) { c.normalize = f.boolean(v); }},
      {"model.loss", [](auto& c, auto v, auto& f) { c.loss = f.guarded(parse_loss, v); }},
      {"model.penalty", [](auto& c, auto v, auto& f) { c.penalty = f.guarded(parse_penalty, v); }},
      {"model.lambda", [](auto& c, auto v, auto& f) { c.lambda = f.real(v); }},
      {"model.rho", [](auto& c, auto v, auto& f) { c.rho = f.real(v); }},
      {"model.zeta", [](auto& c, auto v, auto& f) { c.zeta = f.real(v); }},
      {"model.mcp_b", [](auto& c, auto v, auto& f) { c.mcp_b = f.real(v); }},
      {"model.group_size", [](auto& c, auto v, auto& f) { c.group_size = f.integer(v); }},
      {"run.algorithms",
       [](auto& c, auto v, auto& f) {
         c.algorithms.clear();
         for (auto item : split_list(v)) c.algorithms.push_back(f.guarded(parse_algorithm, item));
       }},
      {"run.step_grid",
       [](auto& c, auto v, auto& f) {
         c.step_grid.clear();
         for (auto item : split_list(v)) c.step_grid.push_back(f.real(item));
       }},
      {"run.schedule_grid",
       [](auto& c, auto v, auto& f) {
         c.schedule_grid.clear();
         for (auto item : split_list(v)) c.schedule_grid.push_back(f.real(item));
       }},
      {"run.passes", [](auto& c, auto v, auto& f) { c.passes = f.integer(v); }},
      {"run.seeds",
       [](auto& c, auto v, auto& f) {
         c.seeds.clear();
         for (auto item : split_list(v)) c.seeds.push_back(f.integer(item));
       }},
      {"run.output_dir", [](auto& c, auto v, auto&) { c.output_dir = std::string(v); }},
      {"run.trace_every", [](auto& c, auto v, auto& f) { c.trace_every = f.integer(v); }},
      {"run.table_mode",
       [](auto& c, auto v, auto& f) {
         if (v == "scalars") c.table_mode = TableMode::Scalars;
         else if (v == "vectors") c.table_mode = TableMode::FullVectors;
         else f.fail(fmt::format("expected scalars or vectors, got '{}'", v));
       }},
      {"run.svrg_inner_m", [](auto& c, auto v, auto& f) { c.svrg_inner_m = f.integer(v); }},
      {"run.record_time", [](auto& c, auto v, auto& f) { c.record_time = f.boolean(v); }},
      {"reference.budget", [](auto& c, auto v, auto& f) { c.reference_budget = f.integer(v); }},
      {"reference.tolerance", [](auto& c, auto v, auto& f) { c.reference_tolerance = f.real(v); }},
  };
  return table;
}

std::vector<Algorithm> all_algorithms() {
  return {Algorithm::SAGA, Algorithm::ProxSVRG, Algorithm::ProxSAG,
          Algorithm::ProxGD, Algorithm::ProxSGD, Algorithm::RDA};
}

ExperimentConfig base(std::string name, std::size_t passes, bool desk) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.algorithms = all_algorithms();
  c.step_grid = default_step_grid();
  c.schedule_grid = default_schedule_grid();
  c.passes = passes;
  c.seeds = desk ? std::vector<std::uint64_t>{1, 2, 3, 4, 5} : std::vector<std::uint64_t>{1};
  c.output_dir = "results/" + c.name;
  return c;
}

ExperimentConfig lasso(std::string name, bool desk, std::size_t r, double b) {
  ExperimentConfig c = base(std::move(name), 150, desk);
  c.synthetic.family = SyntheticFamily::Lasso;
  c.synthetic.n = desk ? 500 : 2500;
  c.synthetic.p = desk ? 1000 : 5000;
  c.synthetic.r = desk ? r / 2 : r;
  c.synthetic.equicorrelation = b;
  c.lambda = 0.05;
  return c;
}

ExperimentConfig group_lasso(std::string name, bool desk, std::size_t m, std::size_t s_g, double b) {
  ExperimentConfig c = base(std::move(name), 150, desk);
  c.synthetic.family = SyntheticFamily::GroupLasso;
  c.synthetic.n = desk ? 500 : 2500;
  c.synthetic.p = desk ? 1000 : 5000;
  c.synthetic.group_size = m;
  c.synthetic.active_groups = desk ? s_g / 2 : s_g;
  c.synthetic.equicorrelation = b;
  c.penalty = PenaltyKind::GroupL2;
  c.lambda = 0.05;
  return c;
}

ExperimentConfig corrected(std::string name, bool desk, std::size_t n, std::size_t p, std::size_t r,
                           double gamma_w) {
  ExperimentConfig c = base(std::move(name), 200, desk);
  c.synthetic.family = SyntheticFamily::CorrectedLasso;
  c.synthetic.n = desk ? 500 : n;
  c.synthetic.p = desk ? p / 5 : p;
  c.synthetic.r = desk ? r / 5 : r;
  c.synthetic.gamma_w = gamma_w;
  c.loss = LossKind::CorrectedQuadratic;
  c.lambda = 0.05;
  c.rho = 2.0 * static_cast<double>(c.synthetic.r);
  c.table_mode = TableMode::FullVectors;
  return c;
}

ExperimentConfig scad(std::string name, bool desk, std::size_t n, std::size_t p, std::size_t r, double zeta) {
  ExperimentConfig c = base(std::move(name), 200, desk);
  c.synthetic.family = SyntheticFamily::ScadRegression;
  c.synthetic.n = desk ? n / 5 : n;
  c.synthetic.p = desk ? p / 5 : p;
  c.synthetic.r = desk ? r / 2 : r;
  c.penalty = PenaltyKind::SCAD;
  c.zeta = zeta;
  c.lambda = 0.05;
  c.table_mode = TableMode::FullVectors;
  return c;
}

ExperimentConfig real(std::string name, bool desk, std::string file, LossKind loss, PenaltyKind pen,
                      double lambda, std::size_t passes) {
  ExperimentConfig c = base(std::move(name), passes, desk);
  c.source = DataSource::LibSvm;
  c.data_path = "data/" + file;
  c.loss = loss;
  c.penalty = pen;
  c.lambda = lambda;
  c.labels = loss == LossKind::Logistic ? LabelMapping::PlusMinus : LabelMapping::Raw;
  c.max_rows = desk ? 2000 : 0;
  c.seeds = {1};
  return c;
}

std::map<std::string, std::function<ExperimentConfig(bool)>, std::less<>> preset_table() {
  using L = LossKind;
  using P = PenaltyKind;
  std::map<std::string, std::function<ExperimentConfig(bool)>, std::less<>> t;
  t["lasso-fig1a"] = [](bool d) { return lasso("lasso-fig1a", d, 50, 0.0); };
  t["lasso-fig1b"] = [](bool d) { return lasso("lasso-fig1b", d, 100, 0.0); };
  t["lasso-fig1c"] = [](bool d) { return lasso("lasso-fig1c", d, 50, 0.1); };
  t["lasso-fig1d"] = [](bool d) { return lasso("lasso-fig1d", d, 100, 0.4); };
  t["group-lasso-fig2a"] = [](bool d) { return group_lasso("group-lasso-fig2a", d, 10, 10, 0.0); };
  t["group-lasso-fig2b"] = [](bool d) { return group_lasso("group-lasso-fig2b", d, 20, 20, 0.0); };
  t["group-lasso-fig2c"] = [](bool d) { return group_lasso("group-lasso-fig2c", d, 10, 10, 0.1); };
  t["group-lasso-fig2d"] = [](bool d) { return group_lasso("group-lasso-fig2d", d, 20, 20, 0.4); };
  t["corrected-lasso-fig3a"] = [](bool d) { return corrected("corrected-lasso-fig3a", d, 2500, 3000, 50, 0.05); };
  t["corrected-lasso-fig3b"] = [](bool d) { return corrected("corrected-lasso-fig3b", d, 2500, 5000, 100, 0.1); };
  t["scad-fig4a"] = [](bool d) { return scad("scad-fig4a", d, 3000, 2500, 30, 4.5); };
  t["scad-fig4b"] = [](bool d) { return scad("scad-fig4b", d, 2500, 5000, 50, 3.7); };
  t["rcv1-logistic"] = [](bool d) { return real("rcv1-logistic", d, "rcv1_train.binary", L::Logistic, P::L1, 2e-5, 100); };
  t["sido0-logistic"] = [](bool d) { return real("sido0-logistic", d, "sido0.libsvm", L::Logistic, P::L1, 1e-4, 100); };
  t["ijcnn1-lasso"] = [](bool d) { return real("ijcnn1-lasso", d, "ijcnn1", L::SquaredError, P::L1, 0.02, 100); };
  t["ijcnn1-scad"] = [](bool d) {
    ExperimentConfig c = real("ijcnn1-scad", d, "ijcnn1", L::SquaredError, P::SCAD, 0.02, 100);
    c.zeta = 5.0;
    c.table_mode = TableMode::FullVectors;
    return c;
  };
  t["boston-group-lasso"] = [](bool d) {
    ExperimentConfig c = real("boston-group-lasso", d, "housing_scale", L::SquaredError, P::GroupL2, 0.1, 100);
    c.poly_degree = 3;
    c.normalize = true;
    c.max_rows = 0;
    return c;
  };
  return t;
}

void check(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

std::string join_reals(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += fmt::format("{}{:.17g}", i ? ", " : "", xs[i]);
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  check(!name.empty(), "name", "must not be empty");
  if (source == DataSource::Synthetic) {
    try {
      synthetic.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("problem", e.what());
    }
    if (synthetic.family == SyntheticFamily::CorrectedLasso) {
      check(loss == LossKind::CorrectedQuadratic, "model.loss", "corrected-lasso data needs the corrected loss");
    }
    if (loss == LossKind::CorrectedQuadratic) {
      check(synthetic.family == SyntheticFamily::CorrectedLasso, "model.loss",
            "the corrected loss needs corrected-lasso data");
      check(synthetic.gamma_w > 0.0, "problem.gamma_w", "must be > 0 for the corrected loss");
    }
    if (penalty == PenaltyKind::GroupL2) {
      check(synthetic.family == SyntheticFamily::GroupLasso, "model.penalty",
            "group-l2 on synthetic data needs the group-lasso family");
    }
  } else {
    check(!data_path.empty(), "problem.path", "required for libsvm data");
    check(loss != LossKind::CorrectedQuadratic, "model.loss", "the corrected loss needs synthetic data");
    if (penalty == PenaltyKind::GroupL2) {
      check(poly_degree > 0 || group_size > 0, "model.group_size",
            "group-l2 on file data needs problem.poly_degree or model.group_size");
    }
  }
  check(lambda > 0.0 && std::isfinite(lambda), "model.lambda", "must be > 0");
  check(rho > 0.0, "model.rho", "must be > 0");
  if (penalty == PenaltyKind::SCAD) check(zeta > 2.0, "model.zeta", "must be > 2");
  if (penalty == PenaltyKind::MCP) check(mcp_b > 0.0, "model.mcp_b", "must be > 0");
  check(!algorithms.empty(), "run.algorithms", "must not be empty");
  check(!step_grid.empty(), "run.step_grid", "must not be empty");
  for (double s : step_grid) check(s > 0.0 && std::isfinite(s), "run.step_grid", "entries must be > 0");
  bool schedules = false;
  for (Algorithm a : algorithms) schedules = schedules || !uses_constant_step(a);
  if (schedules) check(!schedule_grid.empty(), "run.schedule_grid", "must not be empty");
  for (double s : schedule_grid) check(s > 0.0 && std::isfinite(s), "run.schedule_grid", "entries must be > 0");
  check(passes >= 1, "run.passes", "must be >= 1");
  check(!seeds.empty(), "run.seeds", "must not be empty");
  check(!output_dir.empty(), "run.output_dir", "must not be empty");
  check(reference_budget >= 1, "reference.budget", "must be >= 1");
  check(reference_tolerance > 0.0, "reference.tolerance", "must be > 0");
}

std::vector<double> default_step_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 12; ++k) grid.push_back(std::ldexp(2.0, -k));
  return grid;
}

std::vector<double> default_schedule_grid() { return {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2}; }

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  cfg.algorithms = all_algorithms();
  cfg.step_grid = default_step_grid();
  cfg.schedule_grid = default_schedule_grid();
  cfg.seeds = {1};
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("[section]", "unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(std::string(line), "expected key = value", line_no);
    std::string key(trim(line.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(key, "unknown key", line_no);
    const std::string_view value = trim(line.substr(eq + 1));
    it->second(cfg, value, Field{key, line_no});
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& c) {
  std::string out;
  auto line = [&out](std::string_view key, const auto& value) { out += fmt::format("{} = {}\n", key, value); };
  auto real = [&line](std::string_view key, double v) { line(key, fmt::format("{:.17g}", v)); };
  line("name", c.name);
  out += "\n[problem]\n";
  line("source", to_string(c.source));
  if (c.source == DataSource::Synthetic) {
    line("family", to_string(c.synthetic.family));
    line("n", c.synthetic.n);
    line("p", c.synthetic.p);
    line("r", c.synthetic.r);
    line("group_size", c.synthetic.group_size);
    line("active_groups", c.synthetic.active_groups);
    real("equicorrelation", c.synthetic.equicorrelation);
    real("noise_std", c.synthetic.noise_std);
    real("gamma_w", c.synthetic.gamma_w);
    line("seed", c.synthetic.seed);
  } else {
    line("path", c.data_path.string());
    line("labels", to_string(c.labels));
    line("max_rows", c.max_rows);
    line("poly_degree", c.poly_degree);
    line("normalize", c.normalize ? "true" : "false");
  }
  out += "\n[model]\n";
  line("loss", to_string(c.loss));
  line("penalty", to_string(c.penalty));
  real("lambda", c.lambda);
  real("rho", c.rho);
  real("zeta", c.zeta);
  real("mcp_b", c.mcp_b);
  line("group_size", c.group_size);
  out += "\n[run]\n";
  std::string algs;
  for (std::size_t i = 0; i < c.algorithms.size(); ++i) algs += fmt::format("{}{}", i ? ", " : "", to_string(c.algorithms[i]));
  line("algorithms", algs);
  line("step_grid", join_reals(c.step_grid));
  line("schedule_grid", join_reals(c.schedule_grid));
  line("passes", c.passes);
  std::string seeds;
  for (std::size_t i = 0; i < c.seeds.size(); ++i) seeds += fmt::format("{}{}", i ? ", " : "", c.seeds[i]);
  line("seeds", seeds);
  line("output_dir", c.output_dir.string());
  line("trace_every", c.trace_every);
  line("table_mode", to_string(c.table_mode));
  line("svrg_inner_m", c.svrg_inner_m);
  line("record_time", c.record_time ? "true" : "false");
  out += "\n[reference]\n";
  line("budget", c.reference_budget);
  real("tolerance", c.reference_tolerance);
  return out;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, make] : preset_table()) {
    names.push_back(name);
    names.push_back(name + "-desk");
  }
  return names;
}

ExperimentConfig preset(std::string_view name) {
  constexpr std::string_view suffix = "-desk";
  const bool desk = name.size() > suffix.size() && name.substr(name.size() - suffix.size()) == suffix;
  const std::string_view stem = desk ? name.substr(0, name.size() - suffix.size()) : name;
  const auto table = preset_table();
  const auto it = table.find(stem);
  if (it == table.end()) throw ConfigError("preset", fmt::format("unknown preset '{}'", name));
  ExperimentConfig cfg = it->second(desk);
  cfg.name = std::string(name);
  cfg.output_dir = "results/" + cfg.name;
  return cfg;
}

}  // namespace rscsaga
