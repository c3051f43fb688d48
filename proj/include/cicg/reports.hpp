#pragma once

#include "cicg/experiment.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cicg {

/// Header of curves.csv and finals.csv.
inline constexpr const char* kMetricsHeader = "method,run,iter,rmse,q90,q95";

std::string format_number(double v);

std::string metrics_csv(const std::vector<MetricsRow>& rows);
std::string curve_summary_csv(const std::vector<CurvePoint>& points);
std::string trace_csv(const std::vector<TraceRow>& rows);
/// Plain-text table, one row per method: mean +/- std of the final metrics.
std::string summary_table(const std::vector<MethodSummary>& summary,
                          const std::vector<RunFailure>& failures);

std::string sweep_csv(const SweepResult& sweep);
std::string sweep_summary_csv(const SweepResult& sweep);
std::string sweep_summary_table(const SweepResult& sweep);

/// Writes curves.csv, curves_summary.csv, finals.csv, trace.csv,
/// summary.txt and config.txt under `outdir`. Returns the written paths.
std::vector<std::filesystem::path> emit_reports(const MonteCarloResult& result,
                                                const ExperimentConfig& cfg,
                                                const std::filesystem::path& outdir);

/// Writes sweep_<axis>.csv, sweep_<axis>_summary.csv, sweep_<axis>_summary.txt
/// and config.txt.
std::vector<std::filesystem::path> emit_sweep_reports(const SweepResult& sweep,
                                                      const ExperimentConfig& cfg,
                                                      const std::filesystem::path& outdir);

void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace cicg
