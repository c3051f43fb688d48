#include "cicg/config.hpp"

#include "cicg/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cicg {

namespace {

std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v)
{
  const std::string s(v);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ConfigError("config: '" + std::string(key) + "' expects a number, got '" + s + "'");
  return d;
}

std::uint64_t parse_uint(std::string_view key, std::string_view v)
{
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config: '" + std::string(key) + "' expects a nonnegative integer, got '" +
                      std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v)
{
  if (v == "true" || v == "1" || v == "yes")
    return true;
  if (v == "false" || v == "0" || v == "no")
    return false;
  throw ConfigError("config: '" + std::string(key) + "' expects true/false");
}

std::vector<std::string> split_list(std::string_view v)
{
  std::vector<std::string> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    if (!item.empty())
      out.emplace_back(item);
    if (comma == std::string_view::npos)
      break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

ExperimentConfig ExperimentConfig::hard_regime_defaults()
{
  return ExperimentConfig{};
}

const std::vector<std::string>& known_methods()
{
  static const std::vector<std::string> names{ "mse",    "huber",      "student_t", "mcc",
                                               "cic_cg", "cic_gamma0", "cic_pure" };
  return names;
}

ObjectiveSpec method_objective(const ExperimentConfig& cfg, std::string_view method)
{
  if (method == "mse")
    return MseLoss{};
  if (method == "huber")
    return cfg.huber;
  if (method == "student_t")
    return cfg.student;
  if (method == "mcc")
    return cfg.mcc;
  CicLoss cic{ cfg.cic, cfg.marginal, cfg.metric };
  if (method == "cic_cg")
    return cic;
  if (method == "cic_gamma0") {
    cic.cic.gamma = 0.0;
    return cic;
  }
  if (method == "cic_pure") {
    cic.cic.gamma = 1.0;
    return cic;
  }
  throw ConfigError("unknown method '" + std::string(method) + "'");
}

void ExperimentConfig::set(std::string_view key, std::string_view raw)
{
  const std::string_view v = trim(raw);
  auto num = [&] { return parse_double(key, v); };
  auto count = [&] { return static_cast<std::size_t>(parse_uint(key, v)); };

  if (key == "alpha")
    cic.alpha = num();
  else if (key == "delta")
    cic.delta = num();
  else if (key == "gamma")
    cic.gamma = num();
  else if (key == "sigma_k")
    cic.sigma_k = num();
  else if (key == "sigma_eps")
    noise.sigma_eps = num();
  else if (key == "nu")
    noise.nu = num();
  else if (key == "rho")
    noise.rho = num();
  else if (key == "lambda")
    metric.lambda = num();
  else if (key == "eps_sigma")
    metric.ridge = num();
  else if (key == "metric_structure") {
    if (v == "full")
      metric.structure = MetricStructure::full;
    else if (v == "diagonal")
      metric.structure = MetricStructure::diagonal;
    else
      throw ConfigError("config: metric_structure must be full or diagonal");
  } else if (key == "u0") {
    metric.center.clear();
    for (const auto& item : split_list(v))
      metric.center.push_back(parse_double(key, item));
  } else if (key == "marginal") {
    if (v == "student_t")
      marginal.kind = MarginalKind::parametric_t;
    else if (v == "kde")
      marginal.kind = MarginalKind::kde;
    else
      throw ConfigError("config: marginal must be student_t or kde");
  } else if (key == "marginal_nu")
    marginal.nu = num();
  else if (key == "marginal_scale")
    marginal.scale = num();
  else if (key == "kde_bandwidth") {
    if (v == "silverman")
      marginal.bandwidth = BandwidthRule::silverman();
    else
      marginal.bandwidth = BandwidthRule::fixed(num());
  } else if (key == "clip_eps")
    marginal.clip_epsilon = num();
  else if (key == "clip_mode") {
    if (v != "hard")
      throw ConfigError("config: only clip_mode = hard is implemented");
    marginal.clip = ClipMode::hard;
  } else if (key == "huber_delta")
    huber.threshold = num();
  else if (key == "student_nu")
    student.nu = num();
  else if (key == "student_scale")
    student.scale = num();
  else if (key == "mcc_sigma")
    mcc.sigma = num();
  else if (key == "R")
    cg.refresh_period = count();
  else if (key == "eta")
    cg.eta = num();
  else if (key == "M_p")
    cg.max_direction_ratio = num();
  else if (key == "c1")
    cg.c1 = num();
  else if (key == "c2")
    cg.c2 = num();
  else if (key == "iterations")
    cg.max_iterations = count();
  else if (key == "grad_tol")
    cg.gradient_tolerance = num();
  else if (key == "ls_max_evals")
    cg.max_line_search_evaluations = count();
  else if (key == "polish_step")
    cg.polish_step = parse_bool(key, v);
  else if (key == "hidden")
    mlp.hidden = count();
  else if (key == "n_train")
    sizes.train = count();
  else if (key == "n_test")
    sizes.test = count();
  else if (key == "methods")
    methods = split_list(v);
  else if (key == "mc_runs")
    mc_runs = count();
  else if (key == "seed")
    seed = parse_uint(key, v);
  else if (key == "workers")
    workers = count();
  else if (key == "output_dir")
    output_dir = std::string(v);
  else
    throw ConfigError("config: unknown key '" + std::string(key) + "'");
}

void ExperimentConfig::validate() const
{
  noise.validate();
  mlp.validate();
  cg.validate();
  if (mlp.input_dim != 3 || mlp.output_dim != 3 || noise.dim != 3)
    throw ConfigError("config: the benchmark is three-input, three-output");
  if (mc_runs < 1)
    throw ConfigError("config: mc_runs must be at least 1");
  if (sizes.train < 2 || sizes.test < 1)
    throw ConfigError("config: need n_train >= 2 and n_test >= 1");
  if (methods.empty())
    throw ConfigError("config: no methods selected");
  for (const auto& m : methods) {
    if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end())
      throw ConfigError("config: unknown method '" + m + "'");
    cicg::validate(method_objective(*this, m));
  }
}

std::string ExperimentConfig::to_text() const
{
  std::ostringstream os;
  os << "alpha = " << fmt(cic.alpha) << "\n"
     << "delta = " << fmt(cic.delta) << "\n"
     << "gamma = " << fmt(cic.gamma) << "\n"
     << "sigma_k = " << fmt(cic.sigma_k) << "\n"
     << "sigma_eps = " << fmt(noise.sigma_eps) << "\n"
     << "nu = " << fmt(noise.nu) << "\n"
     << "rho = " << fmt(noise.rho) << "\n"
     << "lambda = " << fmt(metric.lambda) << "\n"
     << "eps_sigma = " << fmt(metric.ridge) << "\n"
     << "metric_structure = "
     << (metric.structure == MetricStructure::full ? "full" : "diagonal") << "\n";
  if (!metric.center.empty()) {
    os << "u0 = ";
    for (std::size_t i = 0; i < metric.center.size(); ++i)
      os << (i ? "," : "") << fmt(metric.center[i]);
    os << "\n";
  }
  os << "marginal = " << (marginal.kind == MarginalKind::kde ? "kde" : "student_t") << "\n"
     << "marginal_nu = " << fmt(marginal.nu) << "\n"
     << "marginal_scale = " << fmt(marginal.scale) << "\n"
     << "kde_bandwidth = "
     << (marginal.bandwidth.kind == BandwidthRule::Kind::silverman ? std::string("silverman")
                                                                    : fmt(marginal.bandwidth.value))
     << "\n"
     << "clip_eps = " << fmt(marginal.clip_epsilon) << "\n"
     << "clip_mode = hard\n"
     << "huber_delta = " << fmt(huber.threshold) << "\n"
     << "student_nu = " << fmt(student.nu) << "\n"
     << "student_scale = " << fmt(student.scale) << "\n"
     << "mcc_sigma = " << fmt(mcc.sigma) << "\n"
     << "R = " << cg.refresh_period << "\n"
     << "eta = " << fmt(cg.eta) << "\n"
     << "M_p = " << fmt(cg.max_direction_ratio) << "\n"
     << "c1 = " << fmt(cg.c1) << "\n"
     << "c2 = " << fmt(cg.c2) << "\n"
     << "iterations = " << cg.max_iterations << "\n"
     << "grad_tol = " << fmt(cg.gradient_tolerance) << "\n"
     << "ls_max_evals = " << cg.max_line_search_evaluations << "\n"
     << "polish_step = " << (cg.polish_step ? "true" : "false") << "\n"
     << "hidden = " << mlp.hidden << "\n"
     << "n_train = " << sizes.train << "\n"
     << "n_test = " << sizes.test << "\n"
     << "methods = ";
  for (std::size_t i = 0; i < methods.size(); ++i)
    os << (i ? "," : "") << methods[i];
  os << "\n"
     << "mc_runs = " << mc_runs << "\n"
     << "seed = " << seed << "\n"
     << "workers = " << workers << "\n"
     << "output_dir = " << output_dir.string() << "\n";
  return os.str();
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text)
{
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base)
{
  std::ifstream is(path);
  if (!is)
    throw IoError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  apply_config_text(base, ss.str());
  return base;
}

} // namespace cicg
