#include "cicg/reports.hpp"

#include "cicg/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cicg {

std::string format_number(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

void put_metrics(std::ostringstream& os, const Metrics& m)
{
  os << format_number(m.rmse) << ',' << format_number(m.q90) << ',' << format_number(m.q95);
}

std::string pm(double mean, double sd)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f +/- %.6f", mean, sd);
  return buf;
}

std::string table_rows(const std::vector<MethodSummary>& summary)
{
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %5s %6s  %-22s  %-22s  %-22s\n", "method", "runs",
                "failed", "rmse", "q90", "q95");
  os << line;
  for (const auto& s : summary) {
    std::snprintf(line, sizeof line, "%-12s %5zu %6zu  %-22s  %-22s  %-22s\n", s.method.c_str(),
                  s.runs_ok, s.runs_failed, pm(s.mean.rmse, s.std.rmse).c_str(),
                  pm(s.mean.q90, s.std.q90).c_str(), pm(s.mean.q95, s.std.q95).c_str());
    os << line;
  }
  return os.str();
}

} // namespace

std::string metrics_csv(const std::vector<MetricsRow>& rows)
{
  std::ostringstream os;
  os << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    os << r.method << ',' << r.run << ',' << r.iter << ',';
    put_metrics(os, r.metrics);
    os << '\n';
  }
  return os.str();
}

std::string curve_summary_csv(const std::vector<CurvePoint>& points)
{
  std::ostringstream os;
  os << "method,iter,runs,rmse_mean,rmse_std,q90_mean,q90_std,q95_mean,q95_std\n";
  for (const auto& p : points)
    os << p.method << ',' << p.iter << ',' << p.runs << ',' << format_number(p.mean.rmse) << ','
       << format_number(p.std.rmse) << ',' << format_number(p.mean.q90) << ','
       << format_number(p.std.q90) << ',' << format_number(p.mean.q95) << ','
       << format_number(p.std.q95) << '\n';
  return os.str();
}

std::string trace_csv(const std::vector<TraceRow>& rows)
{
  std::ostringstream os;
  os << "method,run,k,block,value,grad_norm,slope,direction_norm,step,beta,next_value,"
        "next_slope,evaluations,restarted,safeguarded,refreshed,line_search_failed,zoutendijk\n";
  for (const auto& t : rows) {
    const IterationRecord& r = t.record;
    os << t.method << ',' << t.run << ',' << r.k << ',' << r.block << ','
       << format_number(r.value) << ',' << format_number(r.grad_norm) << ','
       << format_number(r.slope) << ',' << format_number(r.direction_norm) << ','
       << format_number(r.step) << ',' << format_number(r.beta) << ','
       << format_number(r.next_value) << ',' << format_number(r.next_slope) << ','
       << r.evaluations << ',' << int(r.restarted) << ',' << int(r.safeguarded) << ','
       << int(r.refreshed) << ',' << int(r.line_search_failed) << ','
       << format_number(r.zoutendijk) << '\n';
  }
  return os.str();
}

std::string summary_table(const std::vector<MethodSummary>& summary,
                          const std::vector<RunFailure>& failures)
{
  std::ostringstream os;
  os << "final test metrics (clean targets), mean +/- std over successful runs\n";
  os << table_rows(summary);
  if (!failures.empty()) {
    os << "\nexcluded runs: " << failures.size() << '\n';
    for (const auto& f : failures)
      os << "  " << f.method << " run " << f.run << ": " << f.message << '\n';
  }
  return os.str();
}

std::string sweep_csv(const SweepResult& sweep)
{
  std::ostringstream os;
  os << "axis,value,method,run,rmse,q90,q95\n";
  const std::string axis = to_string(sweep.axis);
  for (const auto& p : sweep.points)
    for (const auto& r : p.result.finals) {
      os << axis << ',' << format_number(p.value) << ',' << r.method << ',' << r.run << ',';
      put_metrics(os, r.metrics);
      os << '\n';
    }
  return os.str();
}

std::string sweep_summary_csv(const SweepResult& sweep)
{
  std::ostringstream os;
  os << "axis,value,method,runs,failed,rmse_mean,rmse_std,q90_mean,q90_std,q95_mean,q95_std\n";
  const std::string axis = to_string(sweep.axis);
  for (const auto& p : sweep.points)
    for (const auto& s : p.result.summary)
      os << axis << ',' << format_number(p.value) << ',' << s.method << ',' << s.runs_ok << ','
         << s.runs_failed << ',' << format_number(s.mean.rmse) << ','
         << format_number(s.std.rmse) << ',' << format_number(s.mean.q90) << ','
         << format_number(s.std.q90) << ',' << format_number(s.mean.q95) << ','
         << format_number(s.std.q95) << '\n';
  return os.str();
}

std::string sweep_summary_table(const SweepResult& sweep)
{
  std::ostringstream os;
  for (const auto& p : sweep.points) {
    os << to_string(sweep.axis) << " = " << format_number(p.value) << '\n';
    os << table_rows(p.result.summary);
    if (!p.result.failures.empty())
      os << "excluded runs: " << p.result.failures.size() << '\n';
    os << '\n';
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os)
    throw IoError("write failed for " + path.string());
}

namespace {

void make_dir(const std::filesystem::path& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

} // namespace

std::vector<std::filesystem::path> emit_reports(const MonteCarloResult& result,
                                                const ExperimentConfig& cfg,
                                                const std::filesystem::path& outdir)
{
  make_dir(outdir);
  const std::vector<std::pair<std::string, std::string>> files{
    { "curves.csv", metrics_csv(result.curves) },
    { "curves_summary.csv", curve_summary_csv(result.curve_summary) },
    { "finals.csv", metrics_csv(result.finals) },
    { "trace.csv", trace_csv(result.trace) },
    { "summary.txt", summary_table(result.summary, result.failures) },
    { "config.txt", cfg.to_text() },
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, text] : files) {
    write_text_file(outdir / name, text);
    written.push_back(outdir / name);
  }
  return written;
}

std::vector<std::filesystem::path> emit_sweep_reports(const SweepResult& sweep,
                                                      const ExperimentConfig& cfg,
                                                      const std::filesystem::path& outdir)
{
  make_dir(outdir);
  const std::string stem = "sweep_" + to_string(sweep.axis);
  const std::vector<std::pair<std::string, std::string>> files{
    { stem + ".csv", sweep_csv(sweep) },
    { stem + "_summary.csv", sweep_summary_csv(sweep) },
    { stem + "_summary.txt", sweep_summary_table(sweep) },
    { "config.txt", cfg.to_text() },
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, text] : files) {
    write_text_file(outdir / name, text);
    written.push_back(outdir / name);
  }
  return written;
}

} // namespace cicg
