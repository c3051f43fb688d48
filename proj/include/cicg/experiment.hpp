#pragma once

#include "cicg/config.hpp"
#include "cicg/model.hpp"
#include "cicg/optimizer.hpp"

#include <span>
#include <string>
#include <vector>

namespace cicg {

struct Metrics
{
  double rmse = 0.0;
  double q90 = 0.0;
  double q95 = 0.0;
};

/// RMSE over all N * p residual entries against the (clean) test targets,
/// plus the 0.9 / 0.95 empirical quantiles of the pooled |entries|.
Metrics evaluate_metrics(const Mlp& model, std::span<const double> w, const Batch& test);
Metrics metrics_from_residuals(std::span<const double> residual_entries);

/// iter is 1-based: the metrics after iteration iter - 1. Sweep rows carry
/// iter = final iteration count.
struct MetricsRow
{
  std::string method;
  std::size_t run = 0;
  std::size_t iter = 0;
  Metrics metrics;
};

struct TraceRow
{
  std::string method;
  std::size_t run = 0;
  IterationRecord record;
};

struct CurvePoint
{
  std::string method;
  std::size_t iter = 0;
  std::size_t runs = 0;
  Metrics mean;
  Metrics std;
};

struct MethodSummary
{
  std::string method;
  std::size_t runs_ok = 0;
  std::size_t runs_failed = 0;
  Metrics mean;
  Metrics std;
};

struct RunFailure
{
  std::string method;
  std::size_t run = 0;
  std::string message;
};

struct MonteCarloResult
{
  std::vector<std::string> methods;
  std::vector<MetricsRow> curves;   //!< method-major, then run, then iter
  std::vector<MetricsRow> finals;   //!< one per successful (method, run)
  std::vector<CurvePoint> curve_summary;
  std::vector<MethodSummary> summary;
  std::vector<TraceRow> trace;
  std::vector<RunFailure> failures;

  /// Final metrics of `method` indexed by run; failed runs are absent.
  std::vector<const MetricsRow*> finals_of(std::string_view method) const;
  const MethodSummary& summary_of(std::string_view method) const;
};

/// The initialization shared by every method in run `run`.
Vector initial_parameters(const ExperimentConfig& cfg, std::size_t run);

struct MonteCarloOptions
{
  bool record_curves = true;
  bool record_trace = true;
};

/// Per run r: dataset make_dataset(seed, noise, r) (fresh training noise,
/// shared inputs and clean test set) and one initialization drawn from the
/// init substream r, shared by every method. Runs go to a worker pool;
/// results are keyed by run index so output does not depend on scheduling.
/// A run that ends with RunStatus::objective_error is excluded from the
/// aggregates and listed in `failures`.
MonteCarloResult run_monte_carlo(const ExperimentConfig& cfg, MonteCarloOptions opts = {});

enum class SweepAxis
{
  rho,
  nu,
  gamma
};

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view s);
std::vector<double> default_grid(SweepAxis axis);

struct SweepPoint
{
  double value = 0.0;
  MonteCarloResult result; //!< finals and summary only
};

struct SweepResult
{
  SweepAxis axis = SweepAxis::rho;
  std::vector<SweepPoint> points;
};

/// Final-iterate metrics per grid point. The gamma axis overrides the CIC
/// mixing weight of cic_cg; the other methods are run unchanged.
SweepResult run_sweep(const ExperimentConfig& cfg, SweepAxis axis, std::span<const double> grid);

} // namespace cicg
