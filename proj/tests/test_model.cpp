#include <doctest.h>

#include "cicg/error.hpp"
#include "cicg/model.hpp"
#include "cicg/rng.hpp"

#include <cmath>

using namespace cicg;

namespace {

// Straight-line re-evaluation of W2 tanh(W1 x + b1) + b2 from the layout.
Vector reference_forward(const MlpSpec& s, const Vector& w, const Vector& x)
{
  const std::size_t d = s.input_dim, h = s.hidden, p = s.output_dim;
  const double* w1 = w.data();
  const double* b1 = w1 + h * d;
  const double* w2 = b1 + h;
  const double* b2 = w2 + p * h;
  Vector z(h), y(p);
  for (std::size_t j = 0; j < h; ++j) {
    double a = b1[j];
    for (std::size_t i = 0; i < d; ++i)
      a += w1[j * d + i] * x[i];
    z[j] = std::tanh(a);
  }
  for (std::size_t k = 0; k < p; ++k) {
    double a = b2[k];
    for (std::size_t j = 0; j < h; ++j)
      a += w2[k * h + j] * z[j];
    y[k] = a;
  }
  return y;
}

Vector random_vector(std::size_t n, SeededRng& rng, double scale = 1.0)
{
  Vector v(n);
  for (double& x : v)
    x = scale * rng.normal();
  return v;
}

} // namespace

TEST_CASE("parameter count")
{
  CHECK(MlpSpec{}.parameter_count() == 101);
  CHECK(MlpSpec{ 2, 5, 4 }.parameter_count() == 2 * 5 + 5 + 5 * 4 + 4);
  CHECK_THROWS_AS(MlpSpec({ 3, 0, 3 }).validate(), InvalidParameter);
}

TEST_CASE("forward examples")
{
  const Mlp mlp(MlpSpec{});
  Vector w(mlp.parameter_count(), 0.0);
  const Vector x{ 0.3, -0.7, 0.1 };
  CHECK(mlp.forward(w, x) == Vector{ 0, 0, 0 });

  w[w.size() - 3] = 0.2;
  w[w.size() - 2] = 1.0;
  CHECK(mlp.forward(w, x) == Vector{ 0.2, 1.0, 0.0 });

  CHECK_THROWS_AS(mlp.forward(w, Vector{ 1, 2 }), DimensionMismatch);
  CHECK_THROWS_AS(mlp.forward(Vector(100, 0.0), x), DimensionMismatch);
}

TEST_CASE("forward matches independent reimplementation")
{
  SeededRng rng(21);
  for (const MlpSpec spec : { MlpSpec{}, MlpSpec{ 2, 7, 5 }, MlpSpec{ 1, 1, 1 } }) {
    const Mlp mlp(spec);
    for (int t = 0; t < 50; ++t) {
      const Vector w = random_vector(spec.parameter_count(), rng);
      const Vector x = random_vector(spec.input_dim, rng);
      const Vector y = mlp.forward(w, x);
      const Vector ref = reference_forward(spec, w, x);
      for (std::size_t k = 0; k < y.size(); ++k)
        CHECK(y[k] == doctest::Approx(ref[k]).epsilon(1e-14));
      CHECK(mlp.forward(w, x) == y);
    }
  }
}

TEST_CASE("residuals")
{
  SeededRng rng(22);
  const Mlp mlp(MlpSpec{});
  const Vector w = mlp.init_parameters(rng);
  Batch b{ DenseMatrix(5, 3), DenseMatrix(5, 3) };
  for (std::size_t n = 0; n < 5; ++n)
    for (std::size_t i = 0; i < 3; ++i)
      b.inputs(n, i) = rng.uniform(-1, 1);
  for (std::size_t n = 0; n < 5; ++n) {
    const Vector y = mlp.forward(w, b.inputs.row(n));
    for (std::size_t i = 0; i < 3; ++i)
      b.targets(n, i) = y[i];
  }
  const DenseMatrix e = mlp.residuals(w, b);
  for (double v : e.entries())
    CHECK(v == 0.0);

  const Vector zero(mlp.parameter_count(), 0.0);
  CHECK(mlp.residuals(zero, b) == b.targets);

  Batch bad{ DenseMatrix(5, 3), DenseMatrix(4, 3) };
  CHECK_THROWS_AS(mlp.residuals(w, bad), DimensionMismatch);
}

TEST_CASE("jacobian transpose product")
{
  SeededRng rng(23);
  const Mlp mlp(MlpSpec{});
  const Vector w = random_vector(mlp.parameter_count(), rng, 0.5);
  const Vector x = random_vector(3, rng);
  const Vector zero = mlp.jacobian_transpose_product(w, x, Vector{ 0, 0, 0 });
  for (double v : zero)
    CHECK(v == 0.0);
  CHECK_THROWS_AS(mlp.jacobian_transpose_product(w, x, Vector{ 1, 2 }), DimensionMismatch);
}

TEST_CASE("jacobian transpose product matches finite differences per coordinate")
{
  SeededRng rng(24);
  const Mlp mlp(MlpSpec{});
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    Vector w = random_vector(mlp.parameter_count(), rng, 0.6);
    const Vector x = random_vector(3, rng);
    const Vector v = random_vector(3, rng);
    const Vector jtv = mlp.jacobian_transpose_product(w, x, v);
    double jmax = 0.0;
    for (double g : jtv)
      jmax = std::max(jmax, std::abs(g));
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double h = 1e-6, w0 = w[i];
      w[i] = w0 + h;
      const Vector up = mlp.forward(w, x);
      w[i] = w0 - h;
      const Vector dn = mlp.forward(w, x);
      w[i] = w0;
      double fd = 0.0;
      for (std::size_t k = 0; k < 3; ++k)
        fd += v[k] * (up[k] - dn[k]) / (2 * h);
      const double denom = std::max({ std::abs(fd), std::abs(jtv[i]), 1e-3 * jmax });
      worst = std::max(worst, std::abs(fd - jtv[i]) / denom);
    }
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("directional finite differences")
{
  SeededRng rng(25);
  const Mlp mlp(MlpSpec{ 3, 9, 3 });
  for (int t = 0; t < 20; ++t) {
    const Vector w = random_vector(mlp.parameter_count(), rng, 0.7);
    const Vector x = random_vector(3, rng);
    const Vector v = random_vector(3, rng);
    const Vector hdir = random_vector(w.size(), rng);
    const double eps = 1e-6;
    Vector wp = w, wm = w;
    axpy(eps, hdir, wp);
    axpy(-eps, hdir, wm);
    const Vector up = mlp.forward(wp, x), dn = mlp.forward(wm, x);
    double fd = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
      fd += v[k] * (up[k] - dn[k]) / (2 * eps);
    const double an = dot(mlp.jacobian_transpose_product(w, x, v), hdir);
    CHECK(std::abs(an - fd) <= 1e-5 * std::max(std::abs(an), 1e-8));
  }
}

TEST_CASE("small inputs linearize the network")
{
  // With x ~ 1e-8 and b1 = 0, tanh(W1 x) ~ W1 x, so dy/dW1 = W2 diag(1) x^T,
  // dy/db1 = W2 (tanh'(0) = 1), dy/dW2 = tanh(W1 x) ~ 0, dy/db2 = I.
  SeededRng rng(26);
  const MlpSpec s{};
  const Mlp mlp(s);
  Vector w = random_vector(s.parameter_count(), rng, 0.5);
  const std::size_t h = s.hidden, d = s.input_dim;
  for (std::size_t j = 0; j < h; ++j)
    w[h * d + j] = 0.0;
  Vector x = random_vector(3, rng);
  for (double& v : x)
    v *= 1e-8;
  const Vector v = random_vector(3, rng);
  const Vector jtv = mlp.jacobian_transpose_product(w, x, v);
  const double* w2 = w.data() + h * d + h;
  for (std::size_t j = 0; j < h; ++j) {
    double back = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
      back += w2[k * h + j] * v[k];
    CHECK(std::abs(jtv[h * d + j] - back) <= 1e-6);
    for (std::size_t i = 0; i < d; ++i)
      CHECK(std::abs(jtv[j * d + i] - back * x[i]) <= 1e-6);
  }
  for (std::size_t k = 0; k < 3; ++k)
    CHECK(std::abs(jtv[w.size() - 3 + k] - v[k]) <= 1e-6);
}

TEST_CASE("init parameters")
{
  const Mlp mlp(MlpSpec{});
  SeededRng a(1), b(1), c(2);
  const Vector wa = mlp.init_parameters(a);
  CHECK(wa == mlp.init_parameters(b));
  CHECK(wa != mlp.init_parameters(c));
  CHECK(norm2(wa) < 10.0);
  const double lim1 = std::sqrt(6.0 / (3 + 14)), lim2 = std::sqrt(6.0 / (14 + 3));
  for (std::size_t i = 0; i < 42; ++i)
    CHECK(std::abs(wa[i]) <= lim1);
  for (std::size_t i = 42; i < 56; ++i)
    CHECK(wa[i] == 0.0);
  for (std::size_t i = 56; i < 98; ++i)
    CHECK(std::abs(wa[i]) <= lim2);
  for (std::size_t i = 98; i < 101; ++i)
    CHECK(wa[i] == 0.0);
}
