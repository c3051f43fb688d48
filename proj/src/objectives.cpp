#include "cicg/objectives.hpp"

#include "cicg/error.hpp"
#include "cicg/rng.hpp"

#include <cmath>
#include <limits>

namespace cicg {

namespace {

template<class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite_output(std::span<const double> y)
{
  for (double v : y)
    if (!std::isfinite(v))
      throw NonFiniteModelOutput("model output is not finite");
}

void require_finite_gradient(const Vector& g)
{
  for (double v : g)
    if (!std::isfinite(v))
      throw NonFiniteGradient("objective gradient is not finite");
}

void check_inputs(const Mlp& model, std::span<const double> w, const Batch& batch)
{
  batch.validate(model.spec());
  if (w.size() != model.parameter_count())
    throw DimensionMismatch("objective: parameter vector has wrong length");
  if (batch.size() == 0)
    throw EmptyInput("objective: empty batch");
}

void check_cic_state(const Mlp& model, const FrozenMarginals& fm, const CopulaMetric& metric)
{
  const std::size_t p = model.spec().output_dim;
  if (fm.dim() != p || metric.dim() != p)
    throw DimensionMismatch("cic: frozen state dimension does not match model output");
}

// Shared per-sample pass for value-only and value+gradient CIC evaluation.
EvalOut cic_evaluate(const CicConfig& cfg,
                     const Mlp& model,
                     std::span<const double> w,
                     const Batch& batch,
                     const FrozenMarginals& fm,
                     const CopulaMetric& metric,
                     bool with_gradient)
{
  cfg.validate();
  check_inputs(model, w, batch);
  check_cic_state(model, fm, metric);

  const std::size_t n_samples = batch.size();
  const std::size_t p = model.spec().output_dim;
  const double inv_n = 1.0 / static_cast<double>(n_samples);
  const double inv_sk2 = 1.0 / (cfg.sigma_k * cfg.sigma_k);
  const bool dependence = cfg.gamma > 0.0;

  EvalOut out;
  out.kappa.resize(n_samples);
  out.rho.resize(n_samples);
  out.omega.resize(n_samples);
  if (with_gradient)
    out.gradient.assign(model.parameter_count(), 0.0);

  Vector hidden(model.spec().hidden), y(p), e(p), u(p), s(p), solved(p), dens(p), v(p);
  double sum = 0.0;
  for (std::size_t n = 0; n < n_samples; ++n) {
    const auto x = batch.inputs.row(n);
    model.forward(w, x, hidden, y);
    require_finite_output(y);
    double e2 = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      e[i] = batch.targets(n, i) - y[i];
      e2 += e[i] * e[i];
    }
    std::uint32_t clipped = 0;
    fm.transform(e, u, clipped);
    const double rho = metric.centered(u, s, solved);

    const double psi_marg = 0.5 * e2 * inv_sk2;
    const double psi_dep = std::pow(rho + cfg.delta, 0.5 * cfg.alpha);
    const double kappa = std::exp(-(1.0 - cfg.gamma) * psi_marg - cfg.gamma * psi_dep);

    double radial_factor = 0.0; // (rho + delta)^(alpha/2 - 1)
    if (cfg.alpha == 2.0) {
      radial_factor = 1.0;
    } else if (rho + cfg.delta > 0.0) {
      radial_factor = std::pow(rho + cfg.delta, 0.5 * cfg.alpha - 1.0);
    } else if (dependence && with_gradient) {
      throw SingularRadial("cic: rho_n = 0 with alpha < 2 and delta = 0");
    } else {
      radial_factor = std::numeric_limits<double>::infinity();
    }

    out.kappa[n] = kappa;
    out.rho[n] = rho;
    out.omega[n] = 0.5 * cfg.alpha * radial_factor * kappa;
    sum += kappa;

    if (with_gradient) {
      fm.density_diag(e, dens);
      const double dep_coef = dependence ? cfg.gamma * cfg.alpha * radial_factor : 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        v[i] = (1.0 - cfg.gamma) * inv_sk2 * e[i];
        if (dependence)
          v[i] += dep_coef * dens[i] * solved[i];
      }
      model.accumulate_jtv(w, x, hidden, v, -kappa * inv_n, out.gradient);
    }
  }
  out.value = -sum * inv_n;
  if (with_gradient)
    require_finite_gradient(out.gradient);
  return out;
}

} // namespace

void CicConfig::validate(bool convergence_checks) const
{
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw InvalidParameter("CicConfig: alpha must lie in (0, 2]");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw InvalidParameter("CicConfig: gamma must lie in [0, 1]");
  if (!(delta >= 0.0))
    throw InvalidParameter("CicConfig: delta must be nonnegative");
  if (!(sigma_k > 0.0))
    throw InvalidParameter("CicConfig: sigma_k must be positive");
  if (convergence_checks && alpha < 2.0 && !(delta > 0.0))
    throw InvalidParameter("CicConfig: alpha < 2 requires delta > 0 for the convergence guarantees");
}

std::string objective_name(const ObjectiveSpec& spec)
{
  return std::visit(overloaded{
                      [](const MseLoss&) { return std::string("mse"); },
                      [](const HuberLoss&) { return std::string("huber"); },
                      [](const StudentTLoss&) { return std::string("student_t"); },
                      [](const MccLoss&) { return std::string("mcc"); },
                      [](const CicLoss&) { return std::string("cic"); },
                    },
                    spec);
}

void validate(const ObjectiveSpec& spec)
{
  std::visit(overloaded{
               [](const MseLoss&) {},
               [](const HuberLoss& h) {
                 if (!(h.threshold > 0.0))
                   throw InvalidParameter("huber: threshold must be positive");
               },
               [](const StudentTLoss& t) {
                 if (!(t.nu > 0.0) || !(t.scale > 0.0))
                   throw InvalidParameter("student_t loss: nu and scale must be positive");
               },
               [](const MccLoss& m) {
                 if (!(m.sigma > 0.0))
                   throw InvalidParameter("mcc: sigma must be positive");
               },
               [](const CicLoss& c) {
                 c.cic.validate();
                 if (!(c.marginal.nu > 0.0) || !(c.marginal.scale > 0.0))
                   throw InvalidParameter("cic: marginal nu and scale must be positive");
                 if (!(c.marginal.clip_epsilon > 0.0 && c.marginal.clip_epsilon < 0.5))
                   throw InvalidParameter("cic: clip epsilon must lie in (0, 0.5)");
                 if (!(c.metric.lambda >= 0.0 && c.metric.lambda <= 1.0) || !(c.metric.ridge > 0.0))
                   throw InvalidParameter("cic: need lambda in [0, 1] and ridge > 0");
               },
             },
             spec);
}

FrozenTransform build_transform(const CicLoss& spec, const DenseMatrix& residuals)
{
  const std::size_t p = residuals.cols();
  FrozenMarginals fm =
    spec.marginal.kind == MarginalKind::kde
      ? fit_kde(residuals, spec.marginal.bandwidth, spec.marginal.clip_epsilon)
      : fit_parametric_t(p, spec.marginal.nu, spec.marginal.scale, spec.marginal.clip_epsilon);
  DenseMatrix u(residuals.rows(), p);
  std::uint32_t clipped = 0;
  for (std::size_t n = 0; n < residuals.rows(); ++n)
    fm.transform(residuals.row(n), u.row(n), clipped);
  CopulaMetric metric = estimate_metric(u, spec.metric.lambda, spec.metric.ridge,
                                        spec.metric.center, spec.metric.structure);
  return { std::move(fm), std::move(metric) };
}

double cic_value(const CicConfig& cfg,
                 const Mlp& model,
                 std::span<const double> w,
                 const Batch& batch,
                 const FrozenMarginals& marginals,
                 const CopulaMetric& metric)
{
  return cic_evaluate(cfg, model, w, batch, marginals, metric, false).value;
}

EvalOut cic_gradient(const CicConfig& cfg,
                     const Mlp& model,
                     std::span<const double> w,
                     const Batch& batch,
                     const FrozenMarginals& marginals,
                     const CopulaMetric& metric)
{
  return cic_evaluate(cfg, model, w, batch, marginals, metric, true);
}

EvalOut baseline_value_and_gradient(const ObjectiveSpec& spec,
                                    const Mlp& model,
                                    std::span<const double> w,
                                    const Batch& batch)
{
  if (std::holds_alternative<CicLoss>(spec))
    throw InvalidParameter("baseline_value_and_gradient: CIC needs a frozen transform");
  validate(spec);
  check_inputs(model, w, batch);

  const std::size_t n_samples = batch.size();
  const std::size_t p = model.spec().output_dim;
  const double inv_n = 1.0 / static_cast<double>(n_samples);
  const bool correntropy = std::holds_alternative<MccLoss>(spec);

  EvalOut out;
  out.gradient.assign(model.parameter_count(), 0.0);
  if (correntropy)
    out.kappa.resize(n_samples);

  Vector hidden(model.spec().hidden), y(p), e(p), v(p);
  double sum = 0.0;
  for (std::size_t n = 0; n < n_samples; ++n) {
    const auto x = batch.inputs.row(n);
    model.forward(w, x, hidden, y);
    require_finite_output(y);
    for (std::size_t i = 0; i < p; ++i)
      e[i] = batch.targets(n, i) - y[i];

    // Each branch sets the sample loss and v = d(loss)/de, so that the
    // gradient contribution is -J_n^T v.
    double scale = -inv_n;
    std::visit(overloaded{
                 [&](const MseLoss&) {
                   double l = 0.0;
                   for (std::size_t i = 0; i < p; ++i) {
                     l += 0.5 * e[i] * e[i];
                     v[i] = e[i];
                   }
                   sum += l;
                 },
                 [&](const HuberLoss& h) {
                   const double t = h.threshold;
                   double l = 0.0;
                   for (std::size_t i = 0; i < p; ++i) {
                     const double a = std::abs(e[i]);
                     if (a <= t) {
                       l += 0.5 * e[i] * e[i];
                       v[i] = e[i];
                     } else {
                       l += t * a - 0.5 * t * t;
                       v[i] = e[i] > 0 ? t : -t;
                     }
                   }
                   sum += l;
                 },
                 [&](const StudentTLoss& st) {
                   const double ns2 = st.nu * st.scale * st.scale;
                   double l = 0.0;
                   for (std::size_t i = 0; i < p; ++i) {
                     l += 0.5 * (st.nu + 1.0) * std::log1p(e[i] * e[i] / ns2);
                     v[i] = (st.nu + 1.0) * e[i] / (ns2 + e[i] * e[i]);
                   }
                   sum += l;
                 },
                 [&](const MccLoss& m) {
                   const double inv_s2 = 1.0 / (m.sigma * m.sigma);
                   double e2 = 0.0;
                   for (std::size_t i = 0; i < p; ++i)
                     e2 += e[i] * e[i];
                   const double kappa = std::exp(-0.5 * e2 * inv_s2);
                   out.kappa[n] = kappa;
                   sum -= kappa;
                   for (std::size_t i = 0; i < p; ++i)
                     v[i] = inv_s2 * e[i];
                   scale = -kappa * inv_n;
                 },
                 [](const CicLoss&) {},
               },
               spec);
    model.accumulate_jtv(w, x, hidden, v, scale, out.gradient);
  }
  out.value = sum * inv_n;
  require_finite_gradient(out.gradient);
  return out;
}

bool pure_cic_limit_check(const CicConfig& cfg, std::uint64_t seed)
{
  constexpr double tol = 1e-12;
  SeededRng rng(seed);
  const Mlp model(MlpSpec{ 3, 5, 3 });
  const Vector w = model.init_parameters(rng);
  const std::size_t n = 40;
  Batch batch{ DenseMatrix(n, 3), DenseMatrix(n, 3) };
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      batch.inputs(r, c) = rng.uniform(-1.0, 1.0);
      batch.targets(r, c) = rng.uniform(-1.5, 1.5);
    }
  const DenseMatrix e = model.residuals(w, batch);
  const CicLoss loss{ cfg, {}, {} };
  const FrozenTransform ft = build_transform(loss, e);

  // gamma = 1: independent of sigma_k, equal to the pure CIC average.
  CicConfig pure = cfg;
  pure.gamma = 1.0;
  CicConfig pure_wide = pure;
  pure_wide.sigma_k = 10.0 * cfg.sigma_k;
  double direct = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const CopulaPoint pt = ft.marginals.transform(e.row(r));
    direct += std::exp(-std::pow(ft.metric.radial(pt.u) + pure.delta, 0.5 * pure.alpha));
  }
  direct = -direct / static_cast<double>(n);
  const double v_pure = cic_value(pure, model, w, batch, ft.marginals, ft.metric);
  const double v_wide = cic_value(pure_wide, model, w, batch, ft.marginals, ft.metric);
  if (std::abs(v_pure - direct) > tol || std::abs(v_pure - v_wide) > tol)
    return false;

  // gamma = 0: joint-norm Gaussian correntropy in the raw residuals.
  CicConfig marginal_only = cfg;
  marginal_only.gamma = 0.0;
  const double v_marg = cic_value(marginal_only, model, w, batch, ft.marginals, ft.metric);
  const double v_mcc =
    baseline_value_and_gradient(MccLoss{ cfg.sigma_k }, model, w, batch).value;
  if (std::abs(v_marg - v_mcc) > tol)
    return false;

  // alpha = 2, Sigma = I, delta = 0: Gaussian kernel in copula space.
  CicConfig gaussian = pure;
  gaussian.alpha = 2.0;
  gaussian.delta = 0.0;
  const CopulaMetric identity = CopulaMetric::from_matrix(DenseMatrix::identity(3));
  double gauss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const CopulaPoint pt = ft.marginals.transform(e.row(r));
    double d2 = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      d2 += (pt.u[i] - 0.5) * (pt.u[i] - 0.5);
    gauss += std::exp(-d2);
  }
  gauss = -gauss / static_cast<double>(n);
  const double v_gauss = cic_value(gaussian, model, w, batch, ft.marginals, identity);
  return std::abs(v_gauss - gauss) <= tol;
}

ModelObjective::ModelObjective(const Mlp& model, const Batch& batch, ObjectiveSpec spec)
  : model_(model)
  , batch_(batch)
  , spec_(std::move(spec))
{
  cicg::validate(spec_);
  batch_.validate(model_.spec());
}

void ModelObjective::refresh(std::span<const double> w)
{
  if (const auto* cic = std::get_if<CicLoss>(&spec_))
    transform_ = build_transform(*cic, model_.residuals(w, batch_));
}

EvalOut ModelObjective::evaluate_full(std::span<const double> w) const
{
  if (const auto* cic = std::get_if<CicLoss>(&spec_)) {
    if (!transform_)
      throw Error("ModelObjective: CIC transform not initialized; call refresh first");
    return cic_gradient(cic->cic, model_, w, batch_, transform_->marginals, transform_->metric);
  }
  return baseline_value_and_gradient(spec_, model_, w, batch_);
}

Evaluation ModelObjective::evaluate(std::span<const double> w)
{
  if (std::holds_alternative<CicLoss>(spec_) && !transform_)
    refresh(w);
  EvalOut full = evaluate_full(w);
  return { full.value, std::move(full.gradient) };
}

} // namespace cicg
