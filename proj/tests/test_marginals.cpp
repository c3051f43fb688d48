#include <doctest.h>

#include "cicg/error.hpp"
#include "cicg/marginals.hpp"
#include "cicg/rng.hpp"
#include "cicg/selftest.hpp"

#include <cmath>
#include <numbers>

using namespace cicg;

namespace {

double phi_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

} // namespace

TEST_CASE("kde examples")
{
  const MarginalEstimator k = MarginalEstimator::kde({ -1.0, 1.0 }, 1.0);
  CHECK(k.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  // two-term kernel sum at 0
  const double hand = 0.5 * 2.0 * std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi);
  CHECK(k.pdf(0.0) == doctest::Approx(hand).epsilon(1e-14));
  CHECK(k.cdf(1.0) == doctest::Approx(0.5 * (phi_cdf(2.0) + phi_cdf(0.0))).epsilon(1e-14));
  CHECK(k.cdf(1e6 * 2.0) >= 1.0 - 1e-9);
  CHECK(k.cdf(-1e6 * 2.0) <= 1e-9);

  CHECK_THROWS_AS(MarginalEstimator::kde({}, 1.0), TooFewSamples);
  CHECK_THROWS_AS(MarginalEstimator::kde({ 1.0 }, 0.0), InvalidParameter);
}

TEST_CASE("fit_kde bandwidth rules and degenerate input")
{
  DenseMatrix e(4, 2);
  for (std::size_t n = 0; n < 4; ++n) {
    e(n, 0) = 0.0;
    e(n, 1) = static_cast<double>(n);
  }
  const FrozenMarginals fm = fit_kde(e);
  CHECK(fm.component(0).bandwidth_floored());
  CHECK(fm.component(0).bandwidth() == doctest::Approx(1e-6));
  CHECK(std::isfinite(fm.component(0).pdf(0.0)));
  CHECK(fm.component(0).pdf(0.0) > 0.0);
  CHECK_FALSE(fm.component(1).bandwidth_floored());
  const std::vector<double> col{ 0, 1, 2, 3 };
  const double sd = std::sqrt(5.0 / 3.0);
  CHECK(fm.component(1).bandwidth() == doctest::Approx(1.06 * sd * std::pow(4.0, -0.2)));
  CHECK(silverman_bandwidth(col) == doctest::Approx(1.06 * sd * std::pow(4.0, -0.2)));

  const FrozenMarginals fixed = fit_kde(e, BandwidthRule::fixed(0.5));
  CHECK(fixed.component(1).bandwidth() == 0.5);

  CHECK_THROWS_AS(fit_kde(DenseMatrix(1, 3)), TooFewSamples);
}

TEST_CASE("parametric t marginals")
{
  const FrozenMarginals fm = fit_parametric_t(3, 1.0, 1.0);
  CHECK(fm.component(0).cdf(0.0) == 0.5);
  CHECK(fm.component(1).cdf(1.0) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(fm.component(2).pdf(0.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
  CHECK_THROWS_AS(fit_parametric_t(3, 0.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(fit_parametric_t(3, 1.0, -2.0), InvalidParameter);
}

TEST_CASE("transform examples and clipping")
{
  const FrozenMarginals fm = fit_parametric_t(3, 1.0, 1.0, 1e-6);
  const CopulaPoint mid = fm.transform(Vector{ 0, 0, 0 });
  CHECK(mid.u == Vector{ 0.5, 0.5, 0.5 });
  CHECK(mid.clipped == 0);

  const CopulaPoint one = fm.transform(Vector{ 1, 0, 0 });
  CHECK(one.u[0] == doctest::Approx(0.75).epsilon(1e-13));

  // Cauchy CDF 1e-9 at e = -1 / (pi * 1e-9)
  const double far = -1.0 / (std::numbers::pi * 1e-9);
  CHECK(fm.component(0).cdf(far) == doctest::Approx(1e-9).epsilon(1e-6));
  const CopulaPoint c = fm.transform(Vector{ far, 0.0, -far });
  CHECK(c.u[0] == 1e-6);
  CHECK(c.u[2] == 1.0 - 1e-6);
  CHECK(c.is_clipped(0));
  CHECK_FALSE(c.is_clipped(1));
  CHECK(c.is_clipped(2));

  // raw density is kept where clipping is active
  const Vector dens = fm.density_diag(Vector{ far, 0.0, 0.0 });
  CHECK(dens[0] == doctest::Approx(fm.component(0).pdf(far)));
  CHECK(dens[0] > 0.0);
  CHECK(dens[1] == doctest::Approx(1.0 / std::numbers::pi));

  CHECK_THROWS_AS(fm.transform(Vector{ 1, 2 }), DimensionMismatch);
  CHECK_THROWS_AS(FrozenMarginals({ MarginalEstimator::student_t(1, 1) }, 0.5), InvalidParameter);
  CHECK_THROWS_AS(FrozenMarginals({ MarginalEstimator::student_t(1, 1) }, 0.0), InvalidParameter);
}

TEST_CASE("monotone cdf, nonnegative pdf, derivative consistency")
{
  SeededRng rng(31);
  DenseMatrix e(50, 2);
  for (std::size_t n = 0; n < 50; ++n) {
    e(n, 0) = rng.normal();
    e(n, 1) = 0.3 * rng.normal() / std::sqrt(rng.chi_square(2.2) / 2.2);
  }
  const FrozenMarginals kde = fit_kde(e);
  const FrozenMarginals par = fit_parametric_t(2, 2.2, 0.35);
  for (const FrozenMarginals* fm : { &kde, &par })
    for (std::size_t i = 0; i < 2; ++i) {
      const MarginalEstimator& m = fm->component(i);
      const double scale = m.kind() == MarginalKind::kde ? m.bandwidth() : m.scale();
      for (int t = 0; t < 1000; ++t) {
        double a = rng.uniform(-5, 5), b = rng.uniform(-5, 5);
        if (a > b)
          std::swap(a, b);
        CHECK(m.cdf(a) <= m.cdf(b));
        CHECK(m.pdf(a) >= 0.0);
      }
      for (int t = 0; t < 200; ++t) {
        const double x = rng.uniform(-3, 3);
        const double h = 1e-5 * scale;
        // far tails: the CDF difference is below roundoff
        if (m.pdf(x) < 1e-6)
          continue;
        const double fd = (m.cdf(x + h) - m.cdf(x - h)) / (2 * h);
        CHECK(std::abs(fd - m.pdf(x)) <= 1e-4 * m.pdf(x));
      }
    }
}

TEST_CASE("uniformity and boundedness of the transform")
{
  SeededRng rng(32);
  const std::size_t n = 10000;
  for (const double nu : { 1.0, 2.2, 5.0 }) {
    const FrozenMarginals fm = fit_parametric_t(1, nu, 0.8, 1e-6);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = 0.8 * rng.normal() / std::sqrt(rng.chi_square(nu) / nu);
      u[i] = fm.transform(Vector{ x }).u[0];
      CHECK(u[i] >= 1e-6);
      CHECK(u[i] <= 1.0 - 1e-6);
    }
    CHECK(ks_uniform_statistic(u) < 1.63 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("ks statistic")
{
  CHECK(ks_uniform_statistic({ 0.5 }) == doctest::Approx(0.5));
  CHECK(ks_uniform_statistic({ 0.25, 0.75 }) == doctest::Approx(0.25));
}
