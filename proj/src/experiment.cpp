#include "cicg/experiment.hpp"

#include "cicg/datagen.hpp"
#include "cicg/error.hpp"
#include "cicg/objectives.hpp"
#include "cicg/rng.hpp"
#include "cicg/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace cicg {

namespace {

// Initialization substreams, far from the dataset streams of the same seed.
constexpr std::uint64_t kInitStreamBase = std::uint64_t{ 1 } << 48;

struct MethodRun
{
  bool ok = true;
  std::string error;
  std::vector<Metrics> curve;
  Metrics final_metrics;
  std::vector<IterationRecord> records;
};

struct RunOutput
{
  std::vector<MethodRun> methods;
};

RunOutput run_one(const ExperimentConfig& cfg,
                  const std::vector<ObjectiveSpec>& specs,
                  std::size_t r,
                  const MonteCarloOptions& opts)
{
  const Mlp model(cfg.mlp);
  const Dataset ds = make_dataset(cfg.seed, cfg.noise, r, cfg.sizes);
  const Vector w0 = initial_parameters(cfg, r);

  RunOutput out;
  out.methods.resize(specs.size());
  for (std::size_t m = 0; m < specs.size(); ++m) {
    MethodRun& mr = out.methods[m];
    ModelObjective objective(model, ds.train, specs[m]);
    IterationObserver observer;
    if (opts.record_curves)
      observer = [&](const IterationRecord&, std::span<const double> w_next) {
        mr.curve.push_back(evaluate_metrics(model, w_next, ds.test));
      };
    RunResult res = run_cg(objective, w0, cfg.cg, observer);
    if (res.status == RunStatus::objective_error) {
      mr.ok = false;
      mr.error = res.error;
      continue;
    }
    mr.final_metrics = evaluate_metrics(model, res.w, ds.test);
    if (opts.record_curves) {
      // Early stops hold the last iterate for the rest of the budget.
      if (mr.curve.empty())
        mr.curve.push_back(mr.final_metrics);
      mr.curve.resize(cfg.cg.max_iterations, mr.curve.back());
    }
    if (opts.record_trace)
      mr.records = std::move(res.records);
  }
  return out;
}

Metrics mean_std(std::span<const Metrics> ms, Metrics& sd)
{
  std::vector<double> a(ms.size()), b(ms.size()), c(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    a[i] = ms[i].rmse;
    b[i] = ms[i].q90;
    c[i] = ms[i].q95;
  }
  sd = { standard_deviation(a), standard_deviation(b), standard_deviation(c) };
  return { mean(a), mean(b), mean(c) };
}

} // namespace

Vector initial_parameters(const ExperimentConfig& cfg, std::size_t run)
{
  SeededRng rng(cfg.seed, kInitStreamBase + run);
  return Mlp(cfg.mlp).init_parameters(rng);
}

Metrics metrics_from_residuals(std::span<const double> entries)
{
  if (entries.empty())
    throw EmptyInput("metrics of an empty residual set");
  std::vector<double> abs_e(entries.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    ss += entries[i] * entries[i];
    abs_e[i] = std::abs(entries[i]);
  }
  return { std::sqrt(ss / static_cast<double>(entries.size())),
           empirical_quantile(abs_e, 0.90),
           empirical_quantile(abs_e, 0.95) };
}

Metrics evaluate_metrics(const Mlp& model, std::span<const double> w, const Batch& test)
{
  const DenseMatrix e = model.residuals(w, test);
  return metrics_from_residuals(e.entries());
}

std::vector<const MetricsRow*> MonteCarloResult::finals_of(std::string_view method) const
{
  std::vector<const MetricsRow*> out;
  for (const auto& row : finals)
    if (row.method == method)
      out.push_back(&row);
  return out;
}

const MethodSummary& MonteCarloResult::summary_of(std::string_view method) const
{
  for (const auto& s : summary)
    if (s.method == method)
      return s;
  throw InvalidParameter("no summary for method '" + std::string(method) + "'");
}

MonteCarloResult run_monte_carlo(const ExperimentConfig& cfg, MonteCarloOptions opts)
{
  cfg.validate();
  std::vector<ObjectiveSpec> specs;
  for (const auto& m : cfg.methods)
    specs.push_back(method_objective(cfg, m));

  std::vector<RunOutput> runs(cfg.mc_runs);
  std::size_t workers = cfg.workers ? cfg.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, cfg.mc_runs);

  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr first_error;
  std::atomic<bool> failed{ false };
  auto work = [&] {
    for (std::size_t r = next++; r < cfg.mc_runs && !failed; r = next++) {
      try {
        runs[r] = run_one(cfg, specs, r, opts);
      } catch (...) {
        if (!failed.exchange(true))
          first_error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back(work);
    for (auto& t : pool)
      t.join();
  }
  if (first_error)
    std::rethrow_exception(first_error);

  MonteCarloResult out;
  out.methods = cfg.methods;
  const std::size_t iters = cfg.cg.max_iterations;
  for (std::size_t m = 0; m < specs.size(); ++m) {
    const std::string& name = cfg.methods[m];
    MethodSummary summary;
    summary.method = name;
    std::vector<Metrics> finals;
    std::vector<std::vector<Metrics>> per_iter(opts.record_curves ? iters : 0);
    for (std::size_t r = 0; r < cfg.mc_runs; ++r) {
      const MethodRun& mr = runs[r].methods[m];
      if (!mr.ok) {
        ++summary.runs_failed;
        out.failures.push_back({ name, r, mr.error });
        continue;
      }
      ++summary.runs_ok;
      finals.push_back(mr.final_metrics);
      out.finals.push_back({ name, r, iters, mr.final_metrics });
      for (std::size_t k = 0; k < per_iter.size(); ++k) {
        out.curves.push_back({ name, r, k + 1, mr.curve[k] });
        per_iter[k].push_back(mr.curve[k]);
      }
      for (const auto& rec : mr.records)
        out.trace.push_back({ name, r, rec });
    }
    if (!finals.empty())
      summary.mean = mean_std(finals, summary.std);
    out.summary.push_back(summary);
    for (std::size_t k = 0; k < per_iter.size(); ++k) {
      CurvePoint cp;
      cp.method = name;
      cp.iter = k + 1;
      cp.runs = per_iter[k].size();
      if (!per_iter[k].empty())
        cp.mean = mean_std(per_iter[k], cp.std);
      out.curve_summary.push_back(cp);
    }
  }
  return out;
}

std::string to_string(SweepAxis axis)
{
  switch (axis) {
    case SweepAxis::rho:
      return "rho";
    case SweepAxis::nu:
      return "nu";
    case SweepAxis::gamma:
      return "gamma";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view s)
{
  if (s == "rho")
    return SweepAxis::rho;
  if (s == "nu")
    return SweepAxis::nu;
  if (s == "gamma")
    return SweepAxis::gamma;
  throw ConfigError("unknown sweep axis '" + std::string(s) + "' (rho, nu or gamma)");
}

std::vector<double> default_grid(SweepAxis axis)
{
  switch (axis) {
    case SweepAxis::rho:
      return { 0.0, 0.25, 0.5, 0.75, 0.85, 0.9, 0.99 };
    case SweepAxis::nu:
      return { 2.2, 3.0, 5.0, 10.0, 30.0 };
    case SweepAxis::gamma:
      return { 0.0, 0.55, 1.0 };
  }
  return {};
}

SweepResult run_sweep(const ExperimentConfig& cfg, SweepAxis axis, std::span<const double> grid)
{
  if (grid.empty())
    throw ConfigError("sweep grid is empty");
  SweepResult out{ axis, {} };
  for (const double v : grid) {
    ExperimentConfig point = cfg;
    switch (axis) {
      case SweepAxis::rho:
        point.noise.rho = v;
        break;
      case SweepAxis::nu:
        point.noise.nu = v;
        break;
      case SweepAxis::gamma:
        point.cic.gamma = v;
        break;
    }
    out.points.push_back({ v, run_monte_carlo(point, { false, false }) });
  }
  return out;
}

} // namespace cicg
