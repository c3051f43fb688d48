#include "cicg/optimizer.hpp"

#include "cicg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace cicg {

void CgConfig::validate() const
{
  if (!(eta > 0.0 && eta < 1.0))
    throw InvalidParameter("CgConfig: eta must lie in (0, 1)");
  if (!(c1 > 0.0 && c1 < c2 && c2 < 1.0))
    throw InvalidParameter("CgConfig: need 0 < c1 < c2 < 1");
  if (!(max_direction_ratio > 0.0))
    throw InvalidParameter("CgConfig: M_p must be positive");
  if (refresh_period < 1)
    throw InvalidParameter("CgConfig: refresh period must be at least 1");
  if (!(gradient_tolerance >= 0.0))
    throw InvalidParameter("CgConfig: gradient tolerance must be nonnegative");
  if (max_line_search_evaluations < 2)
    throw InvalidParameter("CgConfig: line search needs at least two evaluations");
}

std::string to_string(RunStatus s)
{
  switch (s) {
    case RunStatus::iteration_limit:
      return "iteration_limit";
    case RunStatus::gradient_tolerance:
      return "gradient_tolerance";
    case RunStatus::line_search_stalled:
      return "line_search_stalled";
    case RunStatus::objective_error:
      return "objective_error";
  }
  return "unknown";
}

double beta_prp_plus(std::span<const double> g, std::span<const double> g_prev)
{
  if (g.size() != g_prev.size())
    throw DimensionMismatch("beta_prp_plus: gradient lengths differ");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    num += g[i] * (g[i] - g_prev[i]);
    den += g_prev[i] * g_prev[i];
  }
  if (!(den > 0.0))
    throw ZeroPreviousGradient("beta_prp_plus: previous gradient is zero");
  return std::max(0.0, num / den);
}

Direction direction(std::span<const double> g,
                    std::span<const double> p_prev,
                    double beta,
                    const CgConfig& cfg)
{
  Direction out;
  out.p.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    out.p[i] = -g[i];
  if (p_prev.empty()) {
    out.restarted = true;
    return out;
  }
  if (p_prev.size() != g.size())
    throw DimensionMismatch("direction: previous direction has wrong length");
  axpy(beta, p_prev, out.p);

  const double gg = dot(g, g);
  if (dot(g, out.p) >= -cfg.eta * gg) {
    out.restarted = true;
  } else if (norm2(out.p) > cfg.max_direction_ratio * std::sqrt(gg)) {
    out.safeguarded = true;
  }
  if (out.restarted || out.safeguarded)
    for (std::size_t i = 0; i < g.size(); ++i)
      out.p[i] = -g[i];
  return out;
}

namespace {

struct Trial
{
  double step;
  LinePoint pt;
};

// Minimizer of the cubic matching values and slopes at a and b; falls back
// to the midpoint when the cubic has no real minimizer.
double cubic_minimizer(const Trial& a, const Trial& b)
{
  const double d1 = a.pt.slope + b.pt.slope - 3.0 * (a.pt.value - b.pt.value) / (a.step - b.step);
  const double disc = d1 * d1 - a.pt.slope * b.pt.slope;
  const double mid = 0.5 * (a.step + b.step);
  if (!(disc >= 0.0) || !std::isfinite(disc))
    return mid;
  const double d2 = (b.step > a.step ? 1.0 : -1.0) * std::sqrt(disc);
  const double den = b.pt.slope - a.pt.slope + 2.0 * d2;
  if (den == 0.0 || !std::isfinite(den))
    return mid;
  const double t = b.step - (b.step - a.step) * (b.pt.slope + d2 - d1) / den;
  return std::isfinite(t) ? t : mid;
}

class WolfeSearch
{
public:
  WolfeSearch(const LineFunction& phi, LinePoint zero, const CgConfig& cfg)
    : phi_(phi)
    , zero_(zero)
    , cfg_(cfg)
  {}

  LineSearchResult run(double initial_step)
  {
    Trial prev{ 0.0, zero_ };
    double a = initial_step;
    for (std::size_t i = 0;; ++i) {
      if (exhausted())
        return failure();
      Trial cur = eval(a);
      if (!armijo(cur) || (i > 0 && cur.pt.value >= prev.pt.value))
        return zoom(prev, cur);
      if (curvature(cur))
        return accept(cur);
      if (cur.pt.slope >= 0.0)
        return zoom(cur, prev);
      prev = cur;
      a = std::min(2.0 * a, kMaxStep);
      if (prev.step >= kMaxStep)
        return failure();
    }
  }

private:
  static constexpr double kMaxStep = 1e10;

  bool exhausted() const { return evaluations_ >= cfg_.max_line_search_evaluations; }

  bool armijo(const Trial& t) const
  {
    return t.pt.value <= zero_.value + cfg_.c1 * t.step * zero_.slope;
  }
  bool curvature(const Trial& t) const
  {
    return std::abs(t.pt.slope) <= -cfg_.c2 * zero_.slope;
  }

  Trial eval(double a)
  {
    ++evaluations_;
    Trial t{ a, phi_(a) };
    if (!std::isfinite(t.pt.value) || !std::isfinite(t.pt.slope))
      t.pt = { std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity() };
    if (armijo(t) && (!best_ || t.pt.value < best_->pt.value))
      best_ = t;
    return t;
  }

  LineSearchResult zoom(Trial lo, Trial hi)
  {
    while (!exhausted()) {
      const double left = std::min(lo.step, hi.step);
      const double right = std::max(lo.step, hi.step);
      const double width = right - left;
      if (width <= 1e-15 * std::max(1.0, right))
        break;
      double a = cubic_minimizer(lo, hi);
      if (!(a >= left + 0.1 * width && a <= right - 0.1 * width))
        a = 0.5 * (left + right);
      Trial cur = eval(a);
      if (!armijo(cur) || cur.pt.value >= lo.pt.value) {
        hi = cur;
      } else {
        if (curvature(cur))
          return accept(cur);
        if (cur.pt.slope * (hi.step - lo.step) >= 0.0)
          hi = lo;
        lo = cur;
      }
    }
    return failure();
  }

  LineSearchResult accept(Trial t)
  {
    if (cfg_.polish_step && t.pt.slope != 0.0 && !exhausted()) {
      const double den = zero_.slope - t.pt.slope;
      const double a = den != 0.0 ? t.step * zero_.slope / den : 0.0;
      if (a > 0.0 && std::isfinite(a) && a != t.step) {
        Trial s = eval(a);
        if (armijo(s) && curvature(s) && s.pt.value <= t.pt.value)
          t = s;
      }
    }
    return { t.step, t.pt, evaluations_, true };
  }

  LineSearchResult failure() const
  {
    if (best_)
      return { best_->step, best_->pt, evaluations_, false };
    return { 0.0, zero_, evaluations_, false };
  }

  const LineFunction& phi_;
  LinePoint zero_;
  const CgConfig& cfg_;
  std::size_t evaluations_ = 0;
  std::optional<Trial> best_;
};

void require_finite(const Evaluation& ev, const char* where)
{
  if (!std::isfinite(ev.value))
    throw NonFiniteModelOutput(std::string(where) + ": objective value is not finite");
  for (double v : ev.gradient)
    if (!std::isfinite(v))
      throw NonFiniteGradient(std::string(where) + ": gradient is not finite");
}

} // namespace

LineSearchResult wolfe_line_search(const LineFunction& phi,
                                   LinePoint at_zero,
                                   double initial_step,
                                   const CgConfig& cfg)
{
  if (!(at_zero.slope < 0.0))
    throw InvalidParameter("wolfe_line_search: phi'(0) must be negative");
  if (!(initial_step > 0.0))
    throw InvalidParameter("wolfe_line_search: initial step must be positive");
  WolfeSearch search(phi, at_zero, cfg);
  return search.run(initial_step);
}

RunResult run_cg(DifferentiableObjective& objective,
                 Vector w0,
                 const CgConfig& cfg,
                 const IterationObserver& observer)
{
  cfg.validate();
  if (w0.size() != objective.dimension())
    throw DimensionMismatch("run_cg: initial point has wrong dimension");

  RunResult res;
  Vector w = std::move(w0);
  try {
    objective.refresh(w);
    Evaluation ev = objective.evaluate(w);
    require_finite(ev, "run_cg");
    Vector g = std::move(ev.gradient);
    double value = ev.value;

    Direction dir = direction(g, {}, 0.0, cfg);
    double beta = 0.0;
    std::size_t block = 0;
    double prev_step = 0.0;
    double prev_slope = 0.0;

    std::vector<std::pair<double, Evaluation>> trials;
    Vector trial_w(w.size());

    for (std::size_t k = 0; k < cfg.max_iterations; ++k) {
      bool refreshed = false;
      if (k > 0 && k % cfg.refresh_period == 0) {
        objective.refresh(w);
        ev = objective.evaluate(w);
        require_finite(ev, "run_cg refresh");
        g = std::move(ev.gradient);
        value = ev.value;
        dir = direction(g, {}, 0.0, cfg);
        beta = 0.0;
        ++block;
        refreshed = true;
        res.refresh_iterations.push_back(k);
      }

      const double gnorm = norm2(g);
      if (gnorm <= cfg.gradient_tolerance) {
        res.status = RunStatus::gradient_tolerance;
        break;
      }
      const Vector& p = dir.p;
      const double slope = dot(g, p);
      const double pnorm = norm2(p);

      double a0 = prev_step > 0.0 ? prev_step * prev_slope / slope : 1.0 / gnorm;
      if (!(a0 > 0.0) || !std::isfinite(a0))
        a0 = 1.0 / gnorm;
      a0 = std::clamp(a0, 1e-12, 1e8);

      trials.clear();
      const LineFunction phi = [&](double a) -> LinePoint {
        for (std::size_t i = 0; i < w.size(); ++i)
          trial_w[i] = w[i] + a * p[i];
        Evaluation te;
        try {
          te = objective.evaluate(trial_w);
        } catch (const NonFiniteModelOutput&) {
          return { std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity() };
        } catch (const NonFiniteGradient&) {
          return { std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity() };
        }
        const LinePoint lp{ te.value, dot(te.gradient, p) };
        trials.emplace_back(a, std::move(te));
        return lp;
      };
      const LineSearchResult ls = wolfe_line_search(phi, { value, slope }, a0, cfg);

      IterationRecord rec;
      rec.k = k;
      rec.block = block;
      rec.value = value;
      rec.grad_norm = gnorm;
      rec.slope = slope;
      rec.direction_norm = pnorm;
      rec.step = ls.step;
      rec.beta = beta;
      rec.next_value = ls.point.value;
      rec.next_slope = ls.point.slope;
      rec.evaluations = ls.evaluations;
      rec.restarted = dir.restarted;
      rec.safeguarded = dir.safeguarded;
      rec.refreshed = refreshed;
      rec.line_search_failed = !ls.converged;
      rec.zoutendijk = slope * slope / (pnorm * pnorm);
      res.records.push_back(rec);

      if (ls.step == 0.0) {
        if (observer)
          observer(rec, w);
        if (dir.restarted || dir.safeguarded) {
          res.status = RunStatus::line_search_stalled;
          break;
        }
        dir = direction(g, {}, 0.0, cfg);
        beta = 0.0;
        prev_step = 0.0;
        continue;
      }

      auto it = std::find_if(trials.begin(), trials.end(),
                             [&](const auto& t) { return t.first == ls.step; });
      if (it == trials.end())
        throw Error("run_cg: accepted step has no stored evaluation");
      for (std::size_t i = 0; i < w.size(); ++i)
        w[i] += ls.step * p[i];
      Vector g_next = std::move(it->second.gradient);
      value = it->second.value;
      if (observer)
        observer(rec, w);

      prev_step = ls.step;
      prev_slope = slope;
      if (ls.converged) {
        beta = beta_prp_plus(g_next, g);
        dir = direction(g_next, dir.p, beta, cfg);
        if (dir.restarted || dir.safeguarded)
          beta = 0.0;
      } else {
        dir = direction(g_next, {}, 0.0, cfg);
        beta = 0.0;
      }
      g = std::move(g_next);
    }
  } catch (const Error& e) {
    res.status = RunStatus::objective_error;
    res.error = e.what();
  }
  res.w = std::move(w);
  return res;
}

} // namespace cicg
