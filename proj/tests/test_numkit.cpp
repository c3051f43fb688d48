#include <doctest.h>

#include "cicg/dense.hpp"
#include "cicg/error.hpp"
#include "cicg/rng.hpp"
#include "cicg/stats.hpp"
#include "cicg/student_t.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace cicg;

namespace {

DenseMatrix random_spd(std::size_t n, SeededRng& rng)
{
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = rng.normal();
  DenseMatrix m = a * a.transpose();
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) += 0.1;
  // exact symmetry after the product
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      m(i, j) = m(j, i);
  return m;
}

} // namespace

TEST_CASE("cholesky examples")
{
  const CholeskyFactor id = cholesky(DenseMatrix::identity(3));
  CHECK(id.lower() == DenseMatrix::identity(3));

  const CholeskyFactor f = cholesky(DenseMatrix{ { 4, 0 }, { 0, 1 } });
  CHECK(f.lower() == DenseMatrix{ { 2, 0 }, { 0, 1 } });

  CHECK_THROWS_AS(cholesky(DenseMatrix{ { 1, 2 }, { 2, 1 } }), NotPositiveDefinite);
  CHECK_THROWS_AS(cholesky(DenseMatrix{ { 1, 0.5 }, { 0.4, 1 } }), InvalidParameter);
}

TEST_CASE("cholesky reconstructs random SPD matrices")
{
  SeededRng rng(3);
  for (std::size_t n = 1; n <= 8; ++n)
    for (int t = 0; t < 20; ++t) {
      const DenseMatrix m = random_spd(n, rng);
      const CholeskyFactor f = cholesky(m);
      const double rel = frobenius_norm(f.reconstruct() - m) / frobenius_norm(m);
      CHECK(rel <= 1e-10);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(f.lower()(i, i) > 0.0);
        for (std::size_t j = i + 1; j < n; ++j)
          CHECK(f.lower()(i, j) == 0.0);
      }
    }
}

TEST_CASE("solve_spd examples and residual")
{
  const Vector b{ 1, 2, 3 };
  CHECK(solve_spd(cholesky(DenseMatrix::identity(3)), b) == b);

  const Vector x = solve_spd(cholesky(DenseMatrix{ { 4, 0 }, { 0, 1 } }), Vector{ 2, 0 });
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x[1] == 0.0);

  CHECK_THROWS_AS(solve_spd(cholesky(DenseMatrix::identity(3)), Vector{ 1, 2 }), DimensionMismatch);

  SeededRng rng(4);
  for (int t = 0; t < 50; ++t) {
    const DenseMatrix m = random_spd(6, rng);
    Vector rhs(6);
    for (double& v : rhs)
      v = rng.normal();
    const Vector sol = solve_spd(cholesky(m), rhs);
    Vector r = m * sol;
    axpy(-1.0, rhs, r);
    CHECK(norm2(r) <= 1e-10 * norm2(rhs));
  }
}

TEST_CASE("symmetric eigenvalues")
{
  const Vector ev = symmetric_eigenvalues(DenseMatrix{ { 2, 1 }, { 1, 2 } });
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(3.0));
}

TEST_CASE("student t cdf examples")
{
  for (const double nu : { 0.5, 1.0, 2.2, 5.0, 30.0 })
    CHECK(student_t_cdf(0.0, nu) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(student_t_cdf(1.0, 1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(student_t_cdf(-1.0, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK_THROWS_AS(student_t_cdf(0.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(student_t_cdf(0.0, 1.0, -1.0), InvalidParameter);
}

TEST_CASE("student t cdf against closed forms")
{
  // Cauchy and nu = 2 have elementary CDFs.
  for (double x = -20.0; x <= 20.0; x += 0.37) {
    CHECK(student_t_cdf(x, 1.0) == doctest::Approx(0.5 + std::atan(x) / std::numbers::pi).epsilon(1e-12));
    CHECK(student_t_cdf(x, 2.0) == doctest::Approx(0.5 + x / (2.0 * std::sqrt(2.0 + x * x))).epsilon(1e-12));
    CHECK(student_t_cdf(2.0 * x, 1.0, 2.0) == doctest::Approx(student_t_cdf(x, 1.0)).epsilon(1e-13));
  }
}

TEST_CASE("student t monotone with limits")
{
  for (const double nu : { 1.0, 2.2, 5.0 }) {
    double prev = 0.0;
    for (double x = -200.0; x <= 200.0; x += 0.5) {
      const double c = student_t_cdf(x, nu);
      CHECK(c >= prev);
      prev = c;
    }
    CHECK(student_t_cdf(-1e12, nu) < 1e-6);
    CHECK(student_t_cdf(1e12, nu) > 1.0 - 1e-6);
  }
}

TEST_CASE("student t pdf and quantile examples")
{
  CHECK(student_t_quantile(0.5, 3.0) == doctest::Approx(0.0));
  CHECK(std::abs(student_t_quantile(0.5, 3.0)) < 1e-12);
  CHECK(student_t_pdf(0.0, 1.0, 1.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
  CHECK(student_t_cdf(student_t_quantile(0.9, 2.2), 2.2) == doctest::Approx(0.9).epsilon(1e-10));
  CHECK_THROWS_AS(student_t_quantile(0.0, 3.0), InvalidParameter);
  CHECK_THROWS_AS(student_t_quantile(1.0, 3.0), InvalidParameter);
  CHECK_THROWS_AS(student_t_pdf(0.0, -1.0), InvalidParameter);
}

TEST_CASE("student t pdf integrates to one")
{
  for (const double nu : { 1.0, 2.2, 5.0, 30.0 }) {
    // Simpson on [-50, 50] plus the exact tail mass outside.
    const int n = 200000;
    const double a = -50.0, b = 50.0, h = (b - a) / n;
    double s = student_t_pdf(a, nu) + student_t_pdf(b, nu);
    for (int i = 1; i < n; ++i)
      s += (i % 2 ? 4.0 : 2.0) * student_t_pdf(a + i * h, nu);
    const double inside = s * h / 3.0;
    const double tails = 2.0 * student_t_cdf(a, nu);
    CHECK(std::abs(inside + tails - 1.0) <= 1e-6);
    if (nu >= 5.0)
      CHECK(std::abs(inside - 1.0) <= 1e-6);
  }
}

TEST_CASE("cdf of quantile is the identity")
{
  for (const double nu : { 1.0, 2.2, 5.0, 30.0 })
    for (int k = 1; k <= 99; ++k) {
      const double p = k / 100.0;
      CHECK(std::abs(student_t_cdf(student_t_quantile(p, nu), nu) - p) <= 1e-10);
      const double q = student_t_quantile(p, nu, 0.35);
      CHECK(std::abs(student_t_cdf(q, nu, 0.35) - p) <= 1e-10);
    }
}

TEST_CASE("incomplete beta closed forms")
{
  for (double x = 0.0; x <= 1.0; x += 0.05) {
    CHECK(incomplete_beta(x, 1.0, 1.0) == doctest::Approx(x).epsilon(1e-13));
    CHECK(incomplete_beta(x, 2.0, 1.0) == doctest::Approx(x * x).epsilon(1e-13));
    CHECK(incomplete_beta(x, 1.0, 3.0) == doctest::Approx(1.0 - std::pow(1.0 - x, 3)).epsilon(1e-13));
  }
}

TEST_CASE("empirical quantile examples")
{
  std::vector<double> tenth;
  for (int i = 1; i <= 10; ++i)
    tenth.push_back(i / 10.0);
  CHECK(empirical_quantile(tenth, 0.9) == doctest::Approx(0.91).epsilon(1e-14));
  CHECK(empirical_quantile(tenth, 0.95) == doctest::Approx(0.955).epsilon(1e-14));
  CHECK(empirical_quantile(tenth, 1.0) == 1.0);
  CHECK(empirical_quantile(tenth, 0.0) == 0.1);
  const std::vector<double> one{ 5.0 };
  CHECK(empirical_quantile(one, 0.5) == 5.0);
  CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5), EmptyInput);
  CHECK_THROWS_AS(empirical_quantile(one, 1.5), InvalidParameter);
}

TEST_CASE("empirical quantile monotone in p and order free")
{
  SeededRng rng(5);
  std::vector<double> v(37);
  for (double& x : v)
    x = rng.normal();
  std::vector<double> rev(v.rbegin(), v.rend());
  double prev = -1e300;
  for (int k = 0; k <= 1000; ++k) {
    const double q = empirical_quantile(v, k / 1000.0);
    CHECK(q >= prev);
    CHECK(q == empirical_quantile(rev, k / 1000.0));
    prev = q;
  }
}

TEST_CASE("seeded rng determinism and streams")
{
  SeededRng a(42), b(42), c(43), s1(42, 1);
  bool differ_seed = false, differ_stream = false;
  for (int i = 0; i < 10000; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differ_seed = differ_seed || x != c.next_u64();
    differ_stream = differ_stream || x != s1.next_u64();
  }
  CHECK(differ_seed);
  CHECK(differ_stream);

  const SeededRng sub = SeededRng(42).substream(1);
  SeededRng sub_copy = sub;
  SeededRng direct(42, 1);
  for (int i = 0; i < 100; ++i)
    CHECK(sub_copy.next_u64() == direct.next_u64());
}

TEST_CASE("rng moments")
{
  SeededRng rng(6);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sg = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sg += rng.gamma(0.7);
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sg / n == doctest::Approx(0.7).epsilon(0.02));
}

TEST_CASE("dense matrix basics")
{
  const DenseMatrix a{ { 1, 2, 3 }, { 4, 5, 6 } };
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  CHECK(a.transpose()(2, 1) == 6);
  const Vector y = a * Vector{ 1, 1, 1 };
  CHECK(y == Vector{ 6, 15 });
  CHECK((a * a.transpose()) == DenseMatrix{ { 14, 32 }, { 32, 77 } });
  CHECK_THROWS_AS(a * a, DimensionMismatch);
  CHECK_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{ 1, 2, 3 }), DimensionMismatch);
  CHECK(DenseMatrix::identity(4).trace() == 4.0);
}
