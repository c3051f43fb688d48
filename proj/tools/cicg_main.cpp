// cicg: experiment runner for copula-induced correntropy learning.

#include "cicg/config.hpp"
#include "cicg/datagen.hpp"
#include "cicg/error.hpp"
#include "cicg/experiment.hpp"
#include "cicg/reports.hpp"
#include "cicg/selftest.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>

namespace {

using namespace cicg;

struct CommonOptions
{
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out;
  std::string methods;
  long long runs = -1;
  long long seed = -1;
  long long workers = -1;
  long long iterations = -1;
  bool assert_checks = false;
};

void add_common(CLI::App* app, CommonOptions& o)
{
  app->add_option("-c,--config", o.config_file, "key = value config file (applied over the defaults)");
  app->add_option("-s,--set", o.overrides, "override one key, e.g. --set gamma=0.3")->take_all();
  app->add_option("-o,--out", o.out, "output directory (default: $CICG_OUTPUT_DIR or ./results)");
  app->add_option("--methods", o.methods, "comma-separated methods");
  app->add_option("--runs", o.runs, "Monte Carlo runs");
  app->add_option("--seed", o.seed, "experiment seed");
  app->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  app->add_option("--iterations", o.iterations, "CG iterations per run");
  app->add_flag("--assert", o.assert_checks, "exit nonzero when an acceptance check fails");
}

// Returns the config plus whether the method list was given explicitly.
std::pair<ExperimentConfig, bool> build_config(const CommonOptions& o)
{
  ExperimentConfig cfg = ExperimentConfig::hard_regime_defaults();
  const char* env = std::getenv(kOutputDirEnv);
  if (env && *env)
    cfg.output_dir = env;
  if (!o.config_file.empty())
    cfg = load_config(o.config_file, cfg);
  for (const auto& kv : o.overrides)
    apply_config_text(cfg, kv);
  if (!o.methods.empty())
    cfg.set("methods", o.methods);
  if (o.runs >= 0)
    cfg.set("mc_runs", std::to_string(o.runs));
  if (o.seed >= 0)
    cfg.set("seed", std::to_string(o.seed));
  if (o.workers >= 0)
    cfg.set("workers", std::to_string(o.workers));
  if (o.iterations >= 0)
    cfg.set("iterations", std::to_string(o.iterations));
  if (!o.out.empty())
    cfg.output_dir = o.out;
  const bool explicit_methods = cfg.methods != ExperimentConfig::hard_regime_defaults().methods;
  return { cfg, explicit_methods };
}

int report(const std::vector<CheckResult>& checks, bool enforce)
{
  bool all = true;
  for (const auto& c : checks) {
    std::printf("%s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str());
    std::size_t start = 0;
    while (start < c.detail.size()) {
      const auto nl = c.detail.find('\n', start);
      std::printf("    %s\n", c.detail.substr(start, nl - start).c_str());
      if (nl == std::string::npos)
        break;
      start = nl + 1;
    }
    all = all && c.passed;
  }
  return enforce && !all ? 1 : 0;
}

void print_written(const std::vector<std::filesystem::path>& files)
{
  for (const auto& f : files)
    std::printf("wrote %s\n", f.string().c_str());
}

int cmd_run(const CommonOptions& o)
{
  const ExperimentConfig cfg = build_config(o).first;
  const MonteCarloResult mc = run_monte_carlo(cfg);
  print_written(emit_reports(mc, cfg, cfg.output_dir));
  std::fputs(summary_table(mc.summary, mc.failures).c_str(), stdout);
  if (!o.assert_checks)
    return 0;
  std::vector<CheckResult> checks{ check_hard_regime_ordering(mc) };
  std::map<std::size_t, std::vector<IterationRecord>> by_run;
  for (const auto& t : mc.trace)
    if (t.method == "cic_cg")
      by_run[t.run].push_back(t.record);
  for (const auto& [r, records] : by_run) {
    CheckResult c = check_safeguards(records, cfg.cg);
    if (!c.passed)
      c.name += " (cic_cg run " + std::to_string(r) + ")";
    if (!c.passed || r == by_run.begin()->first)
      checks.push_back(std::move(c));
  }
  return report(checks, true);
}

std::vector<double> parse_grid(const std::vector<std::string>& items)
{
  std::vector<double> grid;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const std::string tok = item.substr(start, comma - start);
      if (!tok.empty()) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size())
          throw ConfigError("bad grid value '" + tok + "'");
        grid.push_back(v);
      }
      if (comma == std::string::npos)
        break;
      start = comma + 1;
    }
  }
  return grid;
}

int sweep_and_report(ExperimentConfig cfg, SweepAxis axis, std::vector<double> grid, bool enforce)
{
  if (grid.empty())
    grid = default_grid(axis);
  const SweepResult sweep = run_sweep(cfg, axis, grid);
  print_written(emit_sweep_reports(sweep, cfg, cfg.output_dir));
  std::fputs(sweep_summary_table(sweep).c_str(), stdout);
  if (!enforce)
    return 0;
  if (axis == SweepAxis::rho)
    return report({ check_rho_sweep(sweep) }, true);
  if (axis == SweepAxis::nu)
    return report({ check_nu_sweep(sweep) }, true);
  std::puts("no acceptance check is defined for the gamma axis");
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::string& axis_name, const std::vector<std::string>& grid_items)
{
  auto [cfg, explicit_methods] = build_config(o);
  const SweepAxis axis = parse_sweep_axis(axis_name);
  if (!explicit_methods) {
    if (axis == SweepAxis::gamma)
      cfg.methods = { "mcc", "cic_cg" };
    else if (axis == SweepAxis::rho)
      cfg.methods.push_back("cic_gamma0");
  }
  return sweep_and_report(cfg, axis, parse_grid(grid_items), o.assert_checks);
}

int cmd_ablation(const CommonOptions& o, const std::vector<std::string>& grid_items)
{
  auto [cfg, explicit_methods] = build_config(o);
  if (!explicit_methods)
    cfg.methods = { "mcc", "cic_gamma0", "cic_cg" };
  return sweep_and_report(cfg, SweepAxis::rho, parse_grid(grid_items), o.assert_checks);
}

int cmd_dump(const CommonOptions& o, std::uint64_t run, const std::string& file)
{
  const ExperimentConfig cfg = build_config(o).first;
  cfg.validate();
  const Dataset ds = make_dataset(cfg.seed, cfg.noise, run, cfg.sizes);
  std::filesystem::path path = file;
  if (path.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    path = cfg.output_dir / ("dataset_run" + std::to_string(run) + ".csv");
  }
  write_dataset_csv(ds, path);
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int cmd_selftest(const CommonOptions& o)
{
  const std::uint64_t seed = o.seed >= 0 ? static_cast<std::uint64_t>(o.seed) : 1;
  return report(run_selftest(seed), o.assert_checks);
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Copula-induced correntropy learning with safeguarded PRP+ conjugate gradient" };
  app.require_subcommand(1);

  CommonOptions run_o, sweep_o, abl_o, dump_o, self_o;

  auto* run = app.add_subcommand("run", "hard-regime Monte Carlo: curves, finals, summary, trace");
  add_common(run, run_o);

  auto* sweep = app.add_subcommand("sweep", "final metrics over a grid of rho, nu or gamma");
  add_common(sweep, sweep_o);
  std::string axis = "rho";
  std::vector<std::string> sweep_grid;
  sweep->add_option("--axis", axis, "rho | nu | gamma")
    ->check(CLI::IsMember({ "rho", "nu", "gamma" }));
  sweep->add_option("--grid", sweep_grid, "grid values, comma or space separated")->take_all();

  auto* abl = app.add_subcommand("ablation", "MCC vs gamma = 0 vs full CIC-CG over rho");
  add_common(abl, abl_o);
  std::vector<std::string> abl_grid;
  abl->add_option("--grid", abl_grid, "rho values")->take_all();

  auto* dump = app.add_subcommand("dump-dataset", "write one run's dataset as CSV");
  add_common(dump, dump_o);
  std::uint64_t dump_run = 0;
  std::string dump_file;
  dump->add_option("--run", dump_run, "run index (selects the noise draw)");
  dump->add_option("--file", dump_file, "output CSV path");

  auto* self = app.add_subcommand("selftest", "gradient-check and invariant suites");
  add_common(self, self_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run)
      return cmd_run(run_o);
    if (*sweep)
      return cmd_sweep(sweep_o, axis, sweep_grid);
    if (*abl)
      return cmd_ablation(abl_o, abl_grid);
    if (*dump)
      return cmd_dump(dump_o, dump_run, dump_file);
    if (*self)
      return cmd_selftest(self_o);
  } catch (const cicg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
