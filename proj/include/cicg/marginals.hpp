#pragma once

#include "cicg/dense.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cicg {

enum class MarginalKind
{
  kde,
  parametric_t
};

/// Smooth CDF/PDF estimate for one residual component.
class MarginalEstimator
{
public:
  /// Gaussian-kernel KDE over `samples` with bandwidth h > 0.
  static MarginalEstimator kde(std::vector<double> samples, double bandwidth);
  static MarginalEstimator student_t(double nu, double scale);

  MarginalKind kind() const { return kind_; }
  double cdf(double e) const;
  double pdf(double e) const;

  double bandwidth() const { return bandwidth_; }
  double nu() const { return nu_; }
  double scale() const { return scale_; }
  std::span<const double> samples() const { return samples_; }
  /// True when the KDE bandwidth came from the floor because the samples
  /// had no spread.
  bool bandwidth_floored() const { return floored_; }

private:
  MarginalEstimator() = default;

  MarginalKind kind_ = MarginalKind::parametric_t;
  std::vector<double> samples_;
  double bandwidth_ = 0.0;
  double nu_ = 1.0;
  double scale_ = 1.0;
  bool floored_ = false;

  friend MarginalEstimator fit_kde_component(std::span<const double>, double);
};

struct BandwidthRule
{
  enum class Kind
  {
    silverman,
    fixed
  };
  Kind kind = Kind::silverman;
  double value = 0.0; //!< bandwidth for Kind::fixed

  static BandwidthRule silverman() { return {}; }
  static BandwidthRule fixed(double h) { return { Kind::fixed, h }; }
};

/// Silverman's rule 1.06 * sd * N^(-1/5) with floor 1e-6 * (1 + sd).
double silverman_bandwidth(std::span<const double> samples);

enum class ClipMode
{
  hard
};

/// Copula-transformed residual with the clip activity of each coordinate.
struct CopulaPoint
{
  Vector u;
  std::uint32_t clipped = 0; //!< bit i set when coordinate i was clipped
  bool is_clipped(std::size_t i) const { return (clipped >> i) & 1U; }
};

/// One estimator per output component, immutable once built.
class FrozenMarginals
{
public:
  FrozenMarginals(std::vector<MarginalEstimator> components, double clip_epsilon);

  std::size_t dim() const { return components_.size(); }
  double clip_epsilon() const { return clip_epsilon_; }
  const MarginalEstimator& component(std::size_t i) const { return components_[i]; }

  /// u_i = clip(F_i(e_i), eps, 1 - eps).
  CopulaPoint transform(std::span<const double> e) const;
  void transform(std::span<const double> e, std::span<double> u, std::uint32_t& clipped) const;

  /// (f_1(e_1), ..., f_p(e_p)); raw densities even where the transform clipped.
  Vector density_diag(std::span<const double> e) const;
  void density_diag(std::span<const double> e, std::span<double> out) const;

private:
  std::vector<MarginalEstimator> components_;
  double clip_epsilon_;
};

/// KDE per column of `residuals` (N x p). Throws TooFewSamples for N < 2.
FrozenMarginals fit_kde(const DenseMatrix& residuals,
                        BandwidthRule rule = BandwidthRule::silverman(),
                        double clip_epsilon = 1e-6);

FrozenMarginals fit_parametric_t(std::size_t dim,
                                 double nu,
                                 double scale,
                                 double clip_epsilon = 1e-6);

} // namespace cicg
