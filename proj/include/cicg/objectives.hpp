#pragma once

#include "cicg/copula.hpp"
#include "cicg/marginals.hpp"
#include "cicg/model.hpp"
#include "cicg/optimizer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace cicg {

struct CicConfig
{
  double alpha = 1.2;   //!< radial shape, (0, 2]
  double gamma = 0.55;  //!< marginal/dependence mixing, [0, 1]
  double delta = 1e-12; //!< radial smoothing, >= 0
  double sigma_k = 0.8; //!< marginal kernel width

  /// With `convergence_checks`, alpha < 2 additionally requires delta > 0.
  void validate(bool convergence_checks = false) const;
};

struct MarginalConfig
{
  MarginalKind kind = MarginalKind::parametric_t;
  double nu = 1.0;
  double scale = 1.0;
  BandwidthRule bandwidth = BandwidthRule::silverman();
  double clip_epsilon = 1e-6;
  ClipMode clip = ClipMode::hard;
};

struct MetricConfig
{
  double lambda = 0.35;
  double ridge = 1e-8;
  Vector center; //!< empty means (1/2) 1
  MetricStructure structure = MetricStructure::full;
};

struct MseLoss
{};
struct HuberLoss
{
  double threshold = 1.0;
};
struct StudentTLoss
{
  double nu = 3.0;
  double scale = 1.0;
};
struct MccLoss
{
  double sigma = 0.8;
};
struct CicLoss
{
  CicConfig cic;
  MarginalConfig marginal;
  MetricConfig metric;
};

using ObjectiveSpec = std::variant<MseLoss, HuberLoss, StudentTLoss, MccLoss, CicLoss>;

std::string objective_name(const ObjectiveSpec& spec);
void validate(const ObjectiveSpec& spec);

/// Value, gradient and per-sample diagnostics. kappa is filled for the
/// correntropy-family losses; rho and omega only for CIC.
struct EvalOut
{
  double value = 0.0;
  Vector gradient;
  Vector kappa;
  Vector rho;
  Vector omega; //!< (alpha/2) (rho + delta)^(alpha/2 - 1) kappa
};

/// The fixed estimator block: marginals and metric held constant between
/// refreshes.
struct FrozenTransform
{
  FrozenMarginals marginals;
  CopulaMetric metric;
};

/// Fits marginals to `residuals` (parametric marginals ignore them), then
/// estimates the metric from the clipped copula residuals.
FrozenTransform build_transform(const CicLoss& spec, const DenseMatrix& residuals);

/// J = -(1/N) sum_n exp[-(1 - gamma) psi_marg - gamma psi_dep].
double cic_value(const CicConfig& cfg,
                 const Mlp& model,
                 std::span<const double> w,
                 const Batch& batch,
                 const FrozenMarginals& marginals,
                 const CopulaMetric& metric);

/// Value and analytic gradient of cic_value. Throws SingularRadial when
/// alpha < 2, delta = 0, gamma > 0 and some rho_n = 0.
EvalOut cic_gradient(const CicConfig& cfg,
                     const Mlp& model,
                     std::span<const double> w,
                     const Batch& batch,
                     const FrozenMarginals& marginals,
                     const CopulaMetric& metric);

/// MSE, Huber, Student's-t NLL or MCC with gradient. Additive constants are
/// dropped so every loss is zero (MCC: -1) at zero residual.
EvalOut baseline_value_and_gradient(const ObjectiveSpec& spec,
                                    const Mlp& model,
                                    std::span<const double> w,
                                    const Batch& batch);

/// Checks the limiting identities on seeded random data: gamma = 1 drops
/// the marginal term, gamma = 0 is joint-norm Gaussian correntropy, and
/// alpha = 2, Sigma = I, delta = 0 gives exp(-|u - u0|^2). Tolerance 1e-12.
bool pure_cic_limit_check(const CicConfig& cfg, std::uint64_t seed = 7);

/// Model + batch + loss adapter for the CG engine. For CIC, refresh()
/// rebuilds the frozen transform from the residuals at w.
class ModelObjective : public DifferentiableObjective
{
public:
  ModelObjective(const Mlp& model, const Batch& batch, ObjectiveSpec spec);

  std::size_t dimension() const override { return model_.parameter_count(); }
  Evaluation evaluate(std::span<const double> w) override;
  void refresh(std::span<const double> w) override;

  EvalOut evaluate_full(std::span<const double> w) const;
  const ObjectiveSpec& spec() const { return spec_; }
  const std::optional<FrozenTransform>& transform() const { return transform_; }

private:
  const Mlp& model_;
  const Batch& batch_;
  ObjectiveSpec spec_;
  std::optional<FrozenTransform> transform_;
};

} // namespace cicg
