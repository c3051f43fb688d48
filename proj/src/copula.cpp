#include "cicg/copula.hpp"

#include "cicg/error.hpp"

#include <cmath>

namespace cicg {

namespace {

Vector default_center(Vector u0, std::size_t p)
{
  if (u0.empty())
    return Vector(p, 0.5);
  if (u0.size() != p)
    throw DimensionMismatch("CopulaMetric: centre has wrong dimension");
  for (double v : u0)
    if (!(v > 0.0 && v < 1.0))
      throw InvalidParameter("CopulaMetric: centre must lie in (0, 1)^p");
  return u0;
}

} // namespace

CopulaMetric::CopulaMetric(DenseMatrix sigma,
                           CholeskyFactor factor,
                           Vector u0,
                           double lambda,
                           double ridge)
  : sigma_(std::move(sigma))
  , factor_(std::move(factor))
  , u0_(std::move(u0))
  , lambda_(lambda)
  , ridge_(ridge)
{}

CopulaMetric CopulaMetric::from_matrix(DenseMatrix sigma, Vector u0)
{
  CholeskyFactor f = cholesky(sigma);
  Vector c = default_center(std::move(u0), sigma.rows());
  return CopulaMetric(std::move(sigma), std::move(f), std::move(c), 0.0, 0.0);
}

double CopulaMetric::centered(std::span<const double> u,
                              std::span<double> s,
                              std::span<double> solved) const
{
  const std::size_t p = dim();
  if (u.size() != p || s.size() != p || solved.size() != p)
    throw DimensionMismatch("CopulaMetric::centered: wrong dimension");
  for (std::size_t i = 0; i < p; ++i)
    s[i] = u[i] - u0_[i];
  const DenseMatrix& l = factor_.lower();
  // Forward then backward substitution into `solved`.
  for (std::size_t i = 0; i < p; ++i) {
    double acc = s[i];
    for (std::size_t k = 0; k < i; ++k)
      acc -= l(i, k) * solved[k];
    solved[i] = acc / l(i, i);
  }
  // rho = |L^-1 s|^2, which is nonnegative by construction
  double rho = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    rho += solved[i] * solved[i];
  for (std::size_t ii = p; ii-- > 0;) {
    double acc = solved[ii];
    for (std::size_t k = ii + 1; k < p; ++k)
      acc -= l(k, ii) * solved[k];
    solved[ii] = acc / l(ii, ii);
  }
  return rho;
}

CopulaMetric::Centered CopulaMetric::centered(std::span<const double> u) const
{
  Centered c{ Vector(dim()), Vector(dim()) };
  centered(u, c.s, c.solved);
  return c;
}

double CopulaMetric::radial(std::span<const double> u) const
{
  Vector s(dim()), solved(dim());
  return centered(u, s, solved);
}

DenseMatrix sample_covariance(const DenseMatrix& u)
{
  const std::size_t n = u.rows();
  const std::size_t p = u.cols();
  if (n < 2)
    throw TooFewSamples("sample_covariance: need at least two rows");
  Vector mu(p, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < p; ++i)
      mu[i] += u(r, i);
  for (auto& m : mu)
    m /= static_cast<double>(n);
  DenseMatrix cov(p, p);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < p; ++i) {
      const double di = u(r, i) - mu[i];
      for (std::size_t j = i; j < p; ++j)
        cov(i, j) += di * (u(r, j) - mu[j]);
    }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      cov(i, j) /= static_cast<double>(n - 1);
      cov(j, i) = cov(i, j);
    }
  return cov;
}

CopulaMetric estimate_metric(const DenseMatrix& u,
                             double lambda,
                             double ridge,
                             Vector u0,
                             MetricStructure structure)
{
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidParameter("estimate_metric: lambda must lie in [0, 1]");
  if (!(ridge > 0.0))
    throw InvalidParameter("estimate_metric: ridge must be positive");
  if (u.rows() < 2)
    throw TooFewSamples("estimate_metric: need at least two copula residuals");
  const std::size_t p = u.cols();
  DenseMatrix cov = sample_covariance(u);
  if (structure == MetricStructure::diagonal)
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        if (i != j)
          cov(i, j) = 0.0;
  const double target = lambda * cov.trace() / static_cast<double>(p);
  DenseMatrix sigma = (1.0 - lambda) * cov;
  for (std::size_t i = 0; i < p; ++i)
    sigma(i, i) += target + ridge;
  CholeskyFactor f = cholesky(sigma);
  Vector c = default_center(std::move(u0), p);
  return CopulaMetric(std::move(sigma), std::move(f), std::move(c), lambda, ridge);
}

} // namespace cicg
