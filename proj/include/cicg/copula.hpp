#pragma once

#include "cicg/dense.hpp"

#include <span>

namespace cicg {

enum class MetricStructure
{
  full,
  diagonal //!< off-diagonal covariance entries dropped before shrinkage
};

/// Copula-space metric: shrinkage covariance Sigma with its Cholesky
/// factor and the dependence centre u0.
class CopulaMetric
{
public:
  /// Wraps an explicit SPD matrix; u0 defaults to (1/2) 1 when empty.
  static CopulaMetric from_matrix(DenseMatrix sigma, Vector u0 = {});

  const DenseMatrix& sigma() const { return sigma_; }
  const CholeskyFactor& factor() const { return factor_; }
  const Vector& center() const { return u0_; }
  std::size_t dim() const { return sigma_.rows(); }
  double shrinkage() const { return lambda_; }
  double ridge() const { return ridge_; }

  /// rho = s^T Sigma^-1 s with s = u - u0.
  double radial(std::span<const double> u) const;

  struct Centered
  {
    Vector s;
    Vector solved; //!< Sigma^-1 s
  };
  Centered centered(std::span<const double> u) const;
  /// Allocation-free variant; returns rho.
  double centered(std::span<const double> u, std::span<double> s, std::span<double> solved) const;

private:
  CopulaMetric(DenseMatrix sigma, CholeskyFactor factor, Vector u0, double lambda, double ridge);

  DenseMatrix sigma_;
  CholeskyFactor factor_;
  Vector u0_;
  double lambda_ = 0.0;
  double ridge_ = 0.0;

  friend CopulaMetric estimate_metric(const DenseMatrix&, double, double, Vector, MetricStructure);
};

/// Sample covariance of the rows of `u`, mean-centred, 1/(N - 1).
DenseMatrix sample_covariance(const DenseMatrix& u);

/// (1 - lambda) Cov(U) + lambda tr(Cov(U)) I / p + ridge I, factorized.
/// Throws TooFewSamples for fewer than two rows.
CopulaMetric estimate_metric(const DenseMatrix& u,
                             double lambda,
                             double ridge,
                             Vector u0 = {},
                             MetricStructure structure = MetricStructure::full);

} // namespace cicg
