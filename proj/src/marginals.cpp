#include "cicg/marginals.hpp"

#include "cicg/error.hpp"
#include "cicg/stats.hpp"
#include "cicg/student_t.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cicg {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double normal_cdf(double z)
{
  return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
}

} // namespace

MarginalEstimator MarginalEstimator::kde(std::vector<double> samples, double bandwidth)
{
  if (samples.empty())
    throw TooFewSamples("MarginalEstimator::kde: no samples");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw InvalidParameter("MarginalEstimator::kde: bandwidth must be positive");
  MarginalEstimator m;
  m.kind_ = MarginalKind::kde;
  m.samples_ = std::move(samples);
  m.bandwidth_ = bandwidth;
  return m;
}

MarginalEstimator MarginalEstimator::student_t(double nu, double scale)
{
  if (!(nu > 0.0) || !(scale > 0.0))
    throw InvalidParameter("MarginalEstimator::student_t: nu and scale must be positive");
  MarginalEstimator m;
  m.kind_ = MarginalKind::parametric_t;
  m.nu_ = nu;
  m.scale_ = scale;
  return m;
}

double MarginalEstimator::cdf(double e) const
{
  if (kind_ == MarginalKind::parametric_t)
    return student_t_cdf(e, nu_, scale_);
  double s = 0.0;
  for (double x : samples_)
    s += normal_cdf((e - x) / bandwidth_);
  return s / static_cast<double>(samples_.size());
}

double MarginalEstimator::pdf(double e) const
{
  if (kind_ == MarginalKind::parametric_t)
    return student_t_pdf(e, nu_, scale_);
  double s = 0.0;
  for (double x : samples_) {
    const double z = (e - x) / bandwidth_;
    s += std::exp(-0.5 * z * z);
  }
  return kInvSqrt2Pi * s / (static_cast<double>(samples_.size()) * bandwidth_);
}

double silverman_bandwidth(std::span<const double> samples)
{
  if (samples.size() < 2)
    throw TooFewSamples("silverman_bandwidth: need at least two samples");
  const double sd = standard_deviation(samples);
  const double h = 1.06 * sd * std::pow(static_cast<double>(samples.size()), -0.2);
  return std::max(h, 1e-6 * (1.0 + sd));
}

MarginalEstimator fit_kde_component(std::span<const double> samples, double bandwidth)
{
  MarginalEstimator m =
    MarginalEstimator::kde(std::vector<double>(samples.begin(), samples.end()), bandwidth);
  m.floored_ = standard_deviation(samples) == 0.0;
  return m;
}

FrozenMarginals::FrozenMarginals(std::vector<MarginalEstimator> components, double clip_epsilon)
  : components_(std::move(components))
  , clip_epsilon_(clip_epsilon)
{
  if (components_.empty())
    throw InvalidParameter("FrozenMarginals: need at least one component");
  if (components_.size() > 32)
    throw InvalidParameter("FrozenMarginals: at most 32 components");
  if (!(clip_epsilon > 0.0 && clip_epsilon < 0.5))
    throw InvalidParameter("FrozenMarginals: clip epsilon must lie in (0, 0.5)");
}

void FrozenMarginals::transform(std::span<const double> e,
                                std::span<double> u,
                                std::uint32_t& clipped) const
{
  if (e.size() != dim() || u.size() != dim())
    throw DimensionMismatch("FrozenMarginals::transform: wrong residual length");
  clipped = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    double v = components_[i].cdf(e[i]);
    if (v < clip_epsilon_) {
      v = clip_epsilon_;
      clipped |= 1U << i;
    } else if (v > 1.0 - clip_epsilon_) {
      v = 1.0 - clip_epsilon_;
      clipped |= 1U << i;
    }
    u[i] = v;
  }
}

CopulaPoint FrozenMarginals::transform(std::span<const double> e) const
{
  CopulaPoint pt;
  pt.u.resize(dim());
  transform(e, pt.u, pt.clipped);
  return pt;
}

void FrozenMarginals::density_diag(std::span<const double> e, std::span<double> out) const
{
  if (e.size() != dim() || out.size() != dim())
    throw DimensionMismatch("FrozenMarginals::density_diag: wrong residual length");
  for (std::size_t i = 0; i < dim(); ++i)
    out[i] = components_[i].pdf(e[i]);
}

Vector FrozenMarginals::density_diag(std::span<const double> e) const
{
  Vector out(dim());
  density_diag(e, out);
  return out;
}

FrozenMarginals fit_kde(const DenseMatrix& residuals, BandwidthRule rule, double clip_epsilon)
{
  if (residuals.rows() < 2)
    throw TooFewSamples("fit_kde: need at least two samples per component");
  std::vector<MarginalEstimator> comps;
  comps.reserve(residuals.cols());
  for (std::size_t i = 0; i < residuals.cols(); ++i) {
    const Vector col = residuals.column(i);
    double h = rule.kind == BandwidthRule::Kind::fixed ? rule.value : silverman_bandwidth(col);
    comps.push_back(fit_kde_component(col, h));
  }
  return FrozenMarginals(std::move(comps), clip_epsilon);
}

FrozenMarginals fit_parametric_t(std::size_t dim, double nu, double scale, double clip_epsilon)
{
  std::vector<MarginalEstimator> comps(dim, MarginalEstimator::student_t(nu, scale));
  return FrozenMarginals(std::move(comps), clip_epsilon);
}

} // namespace cicg
