#include "cicg/selftest.hpp"

#include "cicg/copula.hpp"
#include "cicg/datagen.hpp"
#include "cicg/error.hpp"
#include "cicg/marginals.hpp"
#include "cicg/objectives.hpp"
#include "cicg/rng.hpp"
#include "cicg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace cicg {

namespace {

std::string fmt(const char* f, double a)
{
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double log_uniform(SeededRng& rng, double lo, double hi)
{
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

struct RandomProblem
{
  Mlp model{ MlpSpec{} };
  Dataset data;
  Vector w;
  CicLoss loss;
};

RandomProblem random_problem(SeededRng& rng, std::size_t n_train)
{
  RandomProblem p;
  NoiseSpec noise;
  noise.nu = rng.uniform(1.5, 10.0);
  noise.rho = rng.uniform(0.0, 0.95);
  noise.sigma_eps = rng.uniform(0.1, 0.6);
  p.data = make_dataset(rng.next_u64(), noise, 0, { n_train, 1 });
  p.w = p.model.init_parameters(rng);
  const double scale = rng.uniform(0.3, 2.0);
  for (double& v : p.w)
    v *= scale;
  for (std::size_t i = p.w.size() - 3; i < p.w.size(); ++i)
    p.w[i] = rng.uniform(-0.5, 0.5);

  CicConfig& c = p.loss.cic;
  c.alpha = rng.uniform(0.3, 2.0);
  c.gamma = rng.uniform();
  c.delta = log_uniform(rng, 1e-12, 1e-2);
  c.sigma_k = rng.uniform(0.3, 2.0);
  MarginalConfig& m = p.loss.marginal;
  if (rng.uniform() < 0.5) {
    m.kind = MarginalKind::parametric_t;
    m.nu = rng.uniform(1.0, 6.0);
    m.scale = rng.uniform(0.3, 2.0);
  } else {
    m.kind = MarginalKind::kde;
  }
  p.loss.metric.lambda = rng.uniform();
  p.loss.metric.structure = rng.uniform() < 0.8 ? MetricStructure::full : MetricStructure::diagonal;
  return p;
}

// Quadratic 1/2 (w - w*)^T A (w - w*) with spectrum in [1, 10].
class Quadratic : public DifferentiableObjective
{
public:
  Quadratic(std::size_t q, SeededRng& rng)
    : a_(q, q)
    , target_(q)
  {
    // Random rotation from Gram-Schmidt on a Gaussian matrix.
    DenseMatrix basis(q, q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j)
        basis(i, j) = rng.normal();
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t k = 0; k < i; ++k) {
        double d = 0.0;
        for (std::size_t j = 0; j < q; ++j)
          d += basis(i, j) * basis(k, j);
        for (std::size_t j = 0; j < q; ++j)
          basis(i, j) -= d * basis(k, j);
      }
      const double nrm = norm2(basis.row(i));
      for (std::size_t j = 0; j < q; ++j)
        basis(i, j) /= nrm;
    }
    for (std::size_t k = 0; k < q; ++k) {
      const double lam = 1.0 + 9.0 * static_cast<double>(k) / static_cast<double>(q - 1);
      for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j)
          a_(i, j) += lam * basis(k, i) * basis(k, j);
    }
    for (double& t : target_)
      t = rng.normal();
  }

  std::size_t dimension() const override { return target_.size(); }
  Evaluation evaluate(std::span<const double> w) override
  {
    Vector d(w.begin(), w.end());
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] -= target_[i];
    Vector g = a_ * d;
    return { 0.5 * dot(d, g), std::move(g) };
  }

private:
  DenseMatrix a_;
  Vector target_;
};


DenseMatrix noise_draws(double nu, double rho, double sigma, std::size_t n, std::uint64_t seed)
{
  NoiseSpec spec;
  spec.nu = nu;
  spec.rho = rho;
  spec.sigma_eps = sigma;
  SeededRng rng(seed);
  return sample_noise(spec, n, rng);
}

std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& tmp, std::size_t lo, std::size_t hi)
{
  if (hi - lo < 2)
    return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = merge_count(v, tmp, lo, mid) + merge_count(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += mid - i;
      tmp[k++] = v[j++];
    } else {
      tmp[k++] = v[i++];
    }
  }
  while (i < mid)
    tmp[k++] = v[i++];
  while (j < hi)
    tmp[k++] = v[j++];
  std::copy(tmp.begin() + lo, tmp.begin() + hi, v.begin() + lo);
  return inv;
}

const std::vector<std::string>& baselines()
{
  static const std::vector<std::string> b{ "mcc", "student_t", "huber", "mse" };
  return b;
}

double metric_of(const Metrics& m, int which)
{
  return which == 0 ? m.rmse : which == 1 ? m.q90 : m.q95;
}

const char* metric_name(int which)
{
  return which == 0 ? "rmse" : which == 1 ? "q90" : "q95";
}

bool has_method(const MonteCarloResult& r, std::string_view m)
{
  return std::find(r.methods.begin(), r.methods.end(), m) != r.methods.end();
}

} // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size())
    throw DimensionMismatch("kendall_tau: length mismatch");
  const std::size_t n = x.size();
  if (n < 2)
    throw TooFewSamples("kendall_tau needs two points");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ys(n), tmp(n);
  for (std::size_t i = 0; i < n; ++i)
    ys[i] = y[idx[i]];
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double discordant = static_cast<double>(merge_count(ys, tmp, 0, n));
  return (pairs - 2.0 * discordant) / pairs;
}

double ks_uniform_statistic(std::vector<double> u)
{
  if (u.empty())
    throw EmptyInput("ks_uniform_statistic");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, static_cast<double>(i + 1) / n - u[i]);
    d = std::max(d, u[i] - static_cast<double>(i) / n);
  }
  return d;
}

CheckResult check_gradient_oracle(std::size_t draws, double tol, std::uint64_t seed)
{
  SeededRng rng(seed);
  double worst = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    RandomProblem p = random_problem(rng, 40);
    const Batch& batch = p.data.train;
    const FrozenTransform ft = build_transform(p.loss, p.model.residuals(p.w, batch));
    const EvalOut ev = cic_gradient(p.loss.cic, p.model, p.w, batch, ft.marginals, ft.metric);
    double gmax = 0.0;
    for (double g : ev.gradient)
      gmax = std::max(gmax, std::abs(g));
    Vector w = p.w;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double h = 1e-5 * (1.0 + std::abs(p.w[i]));
      w[i] = p.w[i] + h;
      const double up = cic_value(p.loss.cic, p.model, w, batch, ft.marginals, ft.metric);
      w[i] = p.w[i] - h;
      const double dn = cic_value(p.loss.cic, p.model, w, batch, ft.marginals, ft.metric);
      w[i] = p.w[i];
      const double fd = (up - dn) / (2.0 * h);
      const double denom =
        std::max({ std::abs(fd), std::abs(ev.gradient[i]), 1e-3 * gmax, 1e-300 });
      worst = std::max(worst, std::abs(fd - ev.gradient[i]) / denom);
    }
  }
  return { "gradient oracle", worst <= tol,
           std::to_string(draws) + " draws, max rel error " + fmt("%.3g", worst) };
}

CheckResult check_objective_bounds(std::size_t evaluations, std::uint64_t seed)
{
  SeededRng rng(seed);
  double kmin = 1.0, kmax = 0.0, jmin = 0.0, jmax = -1.0;
  bool ok = true;
  for (std::size_t t = 0; t < evaluations; ++t) {
    RandomProblem p = random_problem(rng, 20);
    if (t % 4 == 0)
      p.loss.cic.gamma = (t / 4) % 2 ? 1.0 : 0.0;
    const Batch& batch = p.data.train;
    const FrozenTransform ft = build_transform(p.loss, p.model.residuals(p.w, batch));
    const EvalOut ev = cic_gradient(p.loss.cic, p.model, p.w, batch, ft.marginals, ft.metric);
    double sum = 0.0;
    for (double k : ev.kappa)
      sum += k;
    const double avg = sum / static_cast<double>(ev.kappa.size());
    ok = ok && avg > 0.0 && avg <= 1.0 && ev.value >= -1.0 && ev.value < 0.0;
    kmin = std::min(kmin, avg);
    kmax = std::max(kmax, avg);
    jmin = std::min(jmin, ev.value);
    jmax = std::max(jmax, ev.value);
  }
  std::ostringstream os;
  os << evaluations << " evaluations, mean kappa in [" << fmt("%.4g", kmin) << ", "
     << fmt("%.4g", kmax) << "], J in [" << fmt("%.4g", jmin) << ", " << fmt("%.4g", jmax) << "]";
  return { "objective bounds", ok, os.str() };
}

CheckResult check_limit_identities(std::size_t draws, std::uint64_t seed)
{
  SeededRng rng(seed);
  std::size_t passed = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    CicConfig c;
    c.alpha = rng.uniform(0.3, 2.0);
    c.gamma = rng.uniform();
    c.delta = log_uniform(rng, 1e-12, 1e-2);
    c.sigma_k = rng.uniform(0.3, 2.0);
    passed += pure_cic_limit_check(c, rng.next_u64()) ? 1 : 0;
  }
  return { "limit identities", passed == draws,
           std::to_string(passed) + "/" + std::to_string(draws) + " random draws within 1e-12" };
}

CheckResult check_safeguards(const std::vector<IterationRecord>& records, const CgConfig& cfg)
{
  constexpr double slack = 1e-12;
  std::size_t descent = 0, bounded = 0, armijo = 0, curvature = 0, monotone = 0, zout = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const IterationRecord& r = records[i];
    const double g2 = r.grad_norm * r.grad_norm;
    if (r.slope > -cfg.eta * g2 * (1.0 - slack))
      ++descent;
    if (r.direction_norm > cfg.max_direction_ratio * r.grad_norm * (1.0 + slack))
      ++bounded;
    if (!(r.next_value <= r.value + cfg.c1 * r.step * r.slope + slack * std::abs(r.value)) ||
        r.step <= 0.0)
      ++armijo;
    if (!(std::abs(r.next_slope) <= cfg.c2 * std::abs(r.slope)))
      ++curvature;
    if (r.next_value > r.value ||
        (i > 0 && records[i - 1].block == r.block && r.value > records[i - 1].value))
      ++monotone;
    const double bound = cfg.eta * cfg.eta / (cfg.max_direction_ratio * cfg.max_direction_ratio) * g2;
    if (r.zoutendijk < bound * (1.0 - slack))
      ++zout;
  }
  std::ostringstream os;
  os << records.size() << " iterations; violations: descent " << descent << ", bounded "
     << bounded << ", armijo " << armijo << ", curvature " << curvature << ", block-monotone "
     << monotone << ", zoutendijk " << zout;
  const bool ok = !records.empty() && descent + bounded + armijo + curvature + monotone + zout == 0;
  return { "optimizer safeguards", ok, os.str() };
}

CheckResult check_quadratic_termination(std::size_t q, std::uint64_t seed)
{
  SeededRng rng(seed);
  Quadratic f(q, rng);
  Vector w0(q);
  for (double& v : w0)
    v = rng.normal();
  CgConfig cfg;
  cfg.gradient_tolerance = 1e-8;
  cfg.max_iterations = q + 5;
  cfg.refresh_period = cfg.max_iterations + 1;
  const RunResult res = run_cg(f, w0, cfg);
  const double gnorm = norm2(f.evaluate(res.w).gradient);
  const bool ok = res.status == RunStatus::gradient_tolerance && gnorm < 1e-8;
  std::ostringstream os;
  os << "q = " << q << ", " << res.records.size() << " iterations, |g| = " << fmt("%.3g", gnorm)
     << ", status " << to_string(res.status);
  return { "quadratic termination", ok, os.str() };
}

std::vector<CheckResult> check_statistical_suites(std::uint64_t seed)
{
  std::vector<CheckResult> out;

  {
    // Samples from the marginal itself via the scale mixture, not the quantile.
    const std::size_t n = 10000;
    const double crit = 1.63 / std::sqrt(static_cast<double>(n));
    const std::vector<std::pair<double, double>> cases{ { 1.0, 1.0 }, { 2.2, 0.35 }, { 5.0, 2.0 } };
    double worst = 0.0;
    bool bounded = true;
    SeededRng rng(seed, 1);
    for (const auto& [nu, scale] : cases) {
      const FrozenMarginals fm = fit_parametric_t(1, nu, scale, 1e-6);
      std::vector<double> u(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = scale * rng.normal() / std::sqrt(rng.chi_square(nu) / nu);
        const double e[1] = { x };
        u[i] = fm.transform(e).u[0];
        bounded = bounded && u[i] >= 1e-6 && u[i] <= 1.0 - 1e-6;
      }
      worst = std::max(worst, ks_uniform_statistic(u));
    }
    out.push_back({ "copula uniformity", worst < crit && bounded,
                    "max KS " + fmt("%.4g", worst) + " vs critical " + fmt("%.4g", crit) });
  }

  {
    SeededRng rng(seed, 2);
    const double ridge = 1e-8;
    double worst = 1.0;
    std::size_t bad = 0;
    for (std::size_t t = 0; t < 1000; ++t) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 20.0);
      DenseMatrix u(n, 3);
      const std::size_t constant_cols = t % 4;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < 3; ++c)
          u(r, c) = c < constant_cols ? 0.25 + 0.1 * static_cast<double>(c) : rng.uniform(0.01, 0.99);
      if (t % 7 == 0)
        for (std::size_t r = 0; r < n; ++r)
          u(r, 2) = u(r, 1);
      const double lambda = t % 5 == 0 ? 0.0 : rng.uniform();
      const CopulaMetric cm = estimate_metric(u, lambda, ridge);
      const double lmin = symmetric_eigenvalues(cm.sigma()).front();
      worst = std::min(worst, lmin / ridge);
      if (lmin < ridge * (1.0 - 1e-6))
        ++bad;
    }
    out.push_back({ "metric positive definite", bad == 0,
                    "1000 rank-deficient sets, min lambda_min / eps_sigma " + fmt("%.6g", worst) });
  }

  {
    const std::size_t n = 100000;
    std::ostringstream os;
    bool ok = true;

    // Finite fourth moments keep the sample correlation's error small.
    const DenseMatrix z = noise_draws(10.0, 0.0, 1.0, n, seed + 3);
    double worst_corr = 0.0;
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b) {
        const Vector xa = z.column(a), xb = z.column(b);
        const double ma = mean(xa), mb = mean(xb);
        double sab = 0.0, saa = 0.0, sbb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          sab += (xa[i] - ma) * (xb[i] - mb);
          saa += (xa[i] - ma) * (xa[i] - ma);
          sbb += (xb[i] - mb) * (xb[i] - mb);
        }
        worst_corr = std::max(worst_corr, std::abs(sab / std::sqrt(saa * sbb)));
      }
    ok = ok && worst_corr <= 0.02;
    os << "rho=0 max |corr| " << fmt("%.4f", worst_corr);

    double prev = -2.0;
    os << "; kendall tau";
    for (const double rho : { 0.0, 0.5, 0.9 }) {
      const DenseMatrix d = noise_draws(2.2, rho, 0.35, n, seed + 4);
      const double tau = kendall_tau(d.column(0), d.column(1));
      ok = ok && tau > prev;
      prev = tau;
      os << ' ' << fmt("%.4f", tau);
    }

    const DenseMatrix heavy = noise_draws(2.2, 0.85, 0.35, n, seed + 5);
    Vector abs0 = heavy.column(0);
    for (double& v : abs0)
      v = std::abs(v);
    const double q_heavy = empirical_quantile(abs0, 0.999);
    const double q_gauss = 0.35 * 3.2905267314918945; // |N(0,1)| 0.999 quantile
    ok = ok && q_heavy >= 3.0 * q_gauss;
    os << "; q999 ratio " << fmt("%.3g", q_heavy / q_gauss);

    const DenseMatrix light = noise_draws(1e6, 0.85, 1.0, n, seed + 6);
    const Vector c0 = light.column(0);
    const double m0 = mean(c0);
    double m2 = 0.0, m4 = 0.0;
    for (double v : c0) {
      m2 += (v - m0) * (v - m0);
      m4 += std::pow(v - m0, 4);
    }
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    const double excess = m4 / (m2 * m2) - 3.0;
    ok = ok && std::abs(excess) < 0.1;
    os << "; nu=1e6 excess kurtosis " << fmt("%.4f", excess);

    bool chol_ok = true;
    for (int i = 0; i <= 99; ++i) {
      NoiseSpec s;
      s.rho = 0.01 * i;
      try {
        (void)cholesky(s.correlation());
      } catch (const Error&) {
        chol_ok = false;
      }
    }
    ok = ok && chol_ok;
    os << "; R cholesky over rho in [0, 0.99] " << (chol_ok ? "ok" : "failed");
    out.push_back({ "noise sampler", ok, os.str() });
  }
  return out;
}

CheckResult check_hard_regime_ordering(const MonteCarloResult& mc, double min_fraction)
{
  CheckResult res{ "hard-regime ordering", true, {} };
  std::ostringstream os;
  if (!has_method(mc, "cic_cg")) {
    res.passed = false;
    res.detail = "cic_cg missing";
    return res;
  }
  std::map<std::size_t, Metrics> cic;
  for (const auto* r : mc.finals_of("cic_cg"))
    cic[r->run] = r->metrics;
  const MethodSummary& cs = mc.summary_of("cic_cg");
  std::size_t compared = 0;
  for (const auto& b : baselines()) {
    if (!has_method(mc, b))
      continue;
    ++compared;
    const MethodSummary& bs = mc.summary_of(b);
    os << "vs " << b << ':';
    for (int which = 0; which < 3; ++which) {
      std::size_t pairs = 0, wins = 0;
      for (const auto* r : mc.finals_of(b)) {
        const auto it = cic.find(r->run);
        if (it == cic.end())
          continue;
        ++pairs;
        wins += metric_of(it->second, which) < metric_of(r->metrics, which) ? 1 : 0;
      }
      const double cm = metric_of(cs.mean, which), bm = metric_of(bs.mean, which);
      const bool ok = pairs > 0 && cm < bm &&
                      static_cast<double>(wins) >= min_fraction * static_cast<double>(pairs);
      res.passed = res.passed && ok;
      os << ' ' << metric_name(which) << ' ' << fmt("%.5f", cm) << (cm < bm ? " < " : " >= ")
         << fmt("%.5f", bm) << " wins " << wins << '/' << pairs << (ok ? "" : " [x]") << ';';
    }
    os << '\n';
  }
  if (compared == 0) {
    res.passed = false;
    os << "no baselines present\n";
  }
  res.detail = os.str();
  if (!res.detail.empty() && res.detail.back() == '\n')
    res.detail.pop_back();
  return res;
}

CheckResult check_rho_sweep(const SweepResult& sweep)
{
  CheckResult res{ "rho sweep", sweep.axis == SweepAxis::rho && !sweep.points.empty(), {} };
  std::ostringstream os;
  for (const auto& p : sweep.points) {
    const MonteCarloResult& r = p.result;
    os << "rho " << fmt("%g", p.value) << ": ";
    if (!has_method(r, "cic_cg")) {
      res.passed = false;
      os << "cic_cg missing\n";
      continue;
    }
    const double c = r.summary_of("cic_cg").mean.q95;
    os << "cic_cg q95 " << fmt("%.5f", c);
    for (const auto& b : baselines()) {
      if (!has_method(r, b))
        continue;
      const double v = r.summary_of(b).mean.q95;
      const bool ok = c <= v;
      res.passed = res.passed && ok;
      os << ", " << b << ' ' << fmt("%.5f", v) << (ok ? "" : " [x]");
    }
    if (p.value >= 0.75) {
      if (!has_method(r, "cic_gamma0")) {
        res.passed = false;
        os << ", cic_gamma0 missing";
      } else {
        const double g0 = r.summary_of("cic_gamma0").mean.q95;
        const bool ok = g0 >= c;
        res.passed = res.passed && ok;
        os << ", cic_gamma0 " << fmt("%.5f", g0) << (ok ? "" : " [x]");
      }
    }
    os << '\n';
  }
  res.detail = os.str();
  if (!res.detail.empty())
    res.detail.pop_back();
  return res;
}

CheckResult check_nu_sweep(const SweepResult& sweep)
{
  CheckResult res{ "nu sweep", sweep.axis == SweepAxis::nu && sweep.points.size() >= 2, {} };
  if (!res.passed) {
    res.detail = "need a nu sweep with at least two points";
    return res;
  }
  std::vector<const SweepPoint*> pts;
  for (const auto& p : sweep.points)
    pts.push_back(&p);
  std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->value < b->value; });

  std::ostringstream os;
  for (const auto& m : pts.front()->result.methods) {
    os << m << " rmse:";
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const MethodSummary& s = pts[j]->result.summary_of(m);
      os << ' ' << fmt("%.5f", s.mean.rmse);
      if (j == 0)
        continue;
      const MethodSummary& prev = pts[j - 1]->result.summary_of(m);
      const double se = std::sqrt(
        prev.std.rmse * prev.std.rmse / static_cast<double>(std::max<std::size_t>(prev.runs_ok, 1)) +
        s.std.rmse * s.std.rmse / static_cast<double>(std::max<std::size_t>(s.runs_ok, 1)));
      if (s.mean.rmse > prev.mean.rmse + se) {
        res.passed = false;
        os << " [x]";
      }
    }
    os << '\n';
  }
  if (!has_method(pts.front()->result, "mse") || !has_method(pts.front()->result, "cic_cg")) {
    res.passed = false;
    os << "mse and cic_cg needed for the advantage check";
  } else {
    os << "mse - cic_cg:";
    std::size_t best = 0;
    double best_gap = -1e300;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double gap = pts[j]->result.summary_of("mse").mean.rmse -
                         pts[j]->result.summary_of("cic_cg").mean.rmse;
      os << ' ' << fmt("%.5f", gap);
      if (gap > best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    if (best != 0) {
      res.passed = false;
      os << " [x] largest at nu " << fmt("%g", pts[best]->value);
    }
  }
  res.detail = os.str();
  if (!res.detail.empty() && res.detail.back() == '\n')
    res.detail.pop_back();
  return res;
}

std::vector<CheckResult> run_selftest(std::uint64_t seed)
{
  std::vector<CheckResult> out;
  out.push_back(check_gradient_oracle(20, 1e-5, seed + 10));
  out.push_back(check_objective_bounds(1000, seed + 11));
  out.push_back(check_limit_identities(10, seed + 12));
  out.push_back(check_quadratic_termination(101, seed + 13));
  for (auto& c : check_statistical_suites(seed + 14))
    out.push_back(std::move(c));

  ExperimentConfig cfg = ExperimentConfig::hard_regime_defaults();
  const Mlp model(cfg.mlp);
  const Dataset ds = make_dataset(seed, cfg.noise, 0, cfg.sizes);
  SeededRng init(seed, 99);
  ModelObjective objective(model, ds.train, method_objective(cfg, "cic_cg"));
  const RunResult run = run_cg(objective, model.init_parameters(init), cfg.cg);
  CheckResult sg = check_safeguards(run.records, cfg.cg);
  sg.name = "optimizer safeguards (one hard-regime run)";
  out.push_back(sg);
  return out;
}

} // namespace cicg
