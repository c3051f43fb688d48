#include <doctest.h>

#include "cicg/datagen.hpp"
#include "cicg/error.hpp"
#include "cicg/objectives.hpp"
#include "cicg/rng.hpp"
#include "cicg/selftest.hpp"

#include <cmath>

using namespace cicg;

namespace {

const Mlp& small_model()
{
  static const Mlp m(MlpSpec{});
  return m;
}

// Zero weights with output bias b: y = b for every input, so e = d - b.
Vector bias_only(const Vector& b)
{
  Vector w(small_model().parameter_count(), 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    w[w.size() - 3 + i] = b[i];
  return w;
}

Batch single(const Vector& target)
{
  Batch b{ DenseMatrix(1, 3, 0.1), DenseMatrix(1, 3) };
  for (std::size_t i = 0; i < 3; ++i)
    b.targets(0, i) = target[i];
  return b;
}

Batch random_batch(SeededRng& rng, std::size_t n)
{
  Batch b{ DenseMatrix(n, 3), DenseMatrix(n, 3) };
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      b.inputs(r, c) = rng.uniform(-1, 1);
      b.targets(r, c) = 1.5 * rng.normal() / std::sqrt(rng.chi_square(2.5) / 2.5);
    }
  return b;
}

double max_rel_error(const Vector& analytic, const Vector& fd)
{
  double gmax = 0.0;
  for (double g : analytic)
    gmax = std::max(gmax, std::abs(g));
  double worst = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    const double denom = std::max({ std::abs(fd[i]), std::abs(analytic[i]), 1e-3 * gmax, 1e-300 });
    worst = std::max(worst, std::abs(fd[i] - analytic[i]) / denom);
  }
  return worst;
}

template <class F>
Vector central_differences(F&& f, Vector w, double step)
{
  Vector g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double w0 = w[i], h = step * (1.0 + std::abs(w0));
    w[i] = w0 + h;
    const double up = f(w);
    w[i] = w0 - h;
    const double dn = f(w);
    w[i] = w0;
    g[i] = (up - dn) / (2 * h);
  }
  return g;
}

} // namespace

TEST_CASE("config validation")
{
  CHECK_NOTHROW(CicConfig{}.validate(true));
  CHECK_THROWS_AS((CicConfig{ 0.0, 0.5, 1e-12, 0.8 }).validate(), InvalidParameter);
  CHECK_THROWS_AS((CicConfig{ 2.5, 0.5, 1e-12, 0.8 }).validate(), InvalidParameter);
  CHECK_THROWS_AS((CicConfig{ 1.2, 1.5, 1e-12, 0.8 }).validate(), InvalidParameter);
  CHECK_THROWS_AS((CicConfig{ 1.2, 0.5, -1.0, 0.8 }).validate(), InvalidParameter);
  CHECK_THROWS_AS((CicConfig{ 1.2, 0.5, 1e-12, 0.0 }).validate(), InvalidParameter);
  CHECK_NOTHROW((CicConfig{ 1.2, 0.5, 0.0, 0.8 }).validate(false));
  CHECK_THROWS_AS((CicConfig{ 1.2, 0.5, 0.0, 0.8 }).validate(true), InvalidParameter);
  CHECK_NOTHROW((CicConfig{ 2.0, 0.5, 0.0, 0.8 }).validate(true));

  CHECK_THROWS_AS(validate(HuberLoss{ 0.0 }), InvalidParameter);
  CHECK_THROWS_AS(validate(StudentTLoss{ -1.0, 1.0 }), InvalidParameter);
  CHECK_THROWS_AS(validate(MccLoss{ 0.0 }), InvalidParameter);
  CHECK(objective_name(MseLoss{}) == "mse");
  CHECK(objective_name(CicLoss{}) == "cic");
}

TEST_CASE("perfect fit at the copula centre gives J = -1 and zero gradient")
{
  const Vector d{ 0.2, 1.0, 0.0 };
  const Batch b = single(d);
  const Vector w = bias_only(d);
  const FrozenMarginals fm = fit_parametric_t(3, 1.0, 1.0);
  const CopulaMetric id = CopulaMetric::from_matrix(DenseMatrix::identity(3));
  for (const double gamma : { 0.0, 0.55, 1.0 }) {
    const CicConfig c{ 2.0, gamma, 0.0, 0.8 };
    CHECK(cic_value(c, small_model(), w, b, fm, id) == -1.0);
    const EvalOut ev = cic_gradient(c, small_model(), w, b, fm, id);
    CHECK(ev.value == -1.0);
    CHECK(ev.kappa[0] == 1.0);
    for (double g : ev.gradient)
      CHECK(g == 0.0);
  }
}

TEST_CASE("single sample closed form")
{
  // e = (1, 0, 0), Cauchy marginals: u = (0.75, 0.5, 0.5), s = (0.25, 0, 0).
  const Batch b = single(Vector{ 1.0, 0.0, 0.0 });
  const Vector w = bias_only(Vector{ 0, 0, 0 });
  const FrozenMarginals fm = fit_parametric_t(3, 1.0, 1.0);
  const CopulaMetric m = CopulaMetric::from_matrix(DenseMatrix::diagonal(Vector{ 0.0625, 1, 1 }));
  const CicConfig c{ 1.2, 1.0, 0.0, 0.8 };
  const EvalOut ev = cic_gradient(c, small_model(), w, b, fm, m);
  CHECK(ev.rho[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ev.value == doctest::Approx(-std::exp(-1.0)).epsilon(1e-12));
  CHECK(cic_value(c, small_model(), w, b, fm, m) == doctest::Approx(-0.36787944117144233).epsilon(1e-12));
}

TEST_CASE("gamma = 0 equals an independently coded Gaussian correntropy")
{
  SeededRng rng(51);
  for (int t = 0; t < 10; ++t) {
    const Batch b = random_batch(rng, 30);
    const Vector w = small_model().init_parameters(rng);
    const double sigma = rng.uniform(0.3, 2.0);
    const CicLoss loss{ { rng.uniform(0.3, 2.0), 0.0, 1e-12, sigma }, {}, {} };
    const FrozenTransform ft = build_transform(loss, small_model().residuals(w, b));
    double ref = 0.0;
    for (std::size_t n = 0; n < b.size(); ++n) {
      const Vector y = small_model().forward(w, b.inputs.row(n));
      double e2 = 0.0;
      for (std::size_t i = 0; i < 3; ++i)
        e2 += (b.targets(n, i) - y[i]) * (b.targets(n, i) - y[i]);
      ref += std::exp(-e2 / (2 * sigma * sigma));
    }
    ref = -ref / static_cast<double>(b.size());
    CHECK(std::abs(cic_value(loss.cic, small_model(), w, b, ft.marginals, ft.metric) - ref) <= 1e-12);
    CHECK(std::abs(baseline_value_and_gradient(MccLoss{ sigma }, small_model(), w, b).value - ref) <= 1e-12);
  }
}

TEST_CASE("limit identity check")
{
  CHECK(pure_cic_limit_check(CicConfig{}));
  CHECK(pure_cic_limit_check(CicConfig{ 0.7, 0.2, 1e-6, 1.3 }, 99));
  CHECK(check_limit_identities(10, 5).passed);
}

TEST_CASE("regularized weight at rho = 0")
{
  const Vector d{ 0.3, -0.2, 0.9 };
  const Batch b = single(d);
  const Vector w = bias_only(d);
  const FrozenMarginals fm = fit_parametric_t(3, 1.0, 1.0);
  const CopulaMetric id = CopulaMetric::from_matrix(DenseMatrix::identity(3));
  const CicConfig c{ 1.2, 0.55, 1e-12, 0.8 };
  const EvalOut ev = cic_gradient(c, small_model(), w, b, fm, id);
  CHECK(ev.rho[0] == 0.0);
  const double expect = 0.6 * std::pow(1e-12, -0.4) * ev.kappa[0];
  CHECK(std::isfinite(ev.omega[0]));
  CHECK(ev.omega[0] == doctest::Approx(expect).epsilon(1e-12));

  // Larger delta never raises the weight at rho = 0.
  double prev = ev.omega[0];
  for (const double delta : { 1e-10, 1e-8, 1e-6, 1e-4, 1e-2, 1.0 }) {
    const EvalOut e2 = cic_gradient(CicConfig{ 1.2, 0.55, delta, 0.8 }, small_model(), w, b, fm, id);
    CHECK(e2.omega[0] <= prev);
    prev = e2.omega[0];
  }

  CHECK_THROWS_AS(cic_gradient(CicConfig{ 1.2, 0.55, 0.0, 0.8 }, small_model(), w, b, fm, id), SingularRadial);
  // value stays defined
  CHECK(cic_value(CicConfig{ 1.2, 0.55, 0.0, 0.8 }, small_model(), w, b, fm, id) < 0.0);
  // alpha = 2 or gamma = 0 is regular at rho = 0
  CHECK_NOTHROW(cic_gradient(CicConfig{ 2.0, 0.55, 0.0, 0.8 }, small_model(), w, b, fm, id));
  CHECK_NOTHROW(cic_gradient(CicConfig{ 1.2, 0.0, 0.0, 0.8 }, small_model(), w, b, fm, id));
}

TEST_CASE("kappa decays with residual size and radial distance")
{
  const FrozenMarginals fm = fit_parametric_t(3, 1.0, 1.0);
  const CopulaMetric m = CopulaMetric::from_matrix(DenseMatrix::diagonal(Vector{ 0.05, 0.08, 0.1 }));
  const Vector w = bias_only(Vector{ 0, 0, 0 });
  const Vector dir{ 0.6, -0.3, 0.9 };
  double prev_kappa = 2.0, prev_rho = -1.0;
  for (double t = 0.0; t <= 8.0; t += 0.25) {
    const Batch b = single(Vector{ t * dir[0], t * dir[1], t * dir[2] });
    const EvalOut ev = cic_gradient(CicConfig{}, small_model(), w, b, fm, m);
    CHECK(ev.kappa[0] <= prev_kappa);
    CHECK(ev.rho[0] >= prev_rho);
    CHECK(ev.kappa[0] > 0.0);
    CHECK(ev.kappa[0] <= 1.0);
    prev_kappa = ev.kappa[0];
    prev_rho = ev.rho[0];
  }
}

TEST_CASE("cic gradient matches finite differences, step 1e-6, q = 101")
{
  SeededRng rng(52);
  for (int t = 0; t < 20; ++t) {
    const Batch b = random_batch(rng, 25);
    Vector w = small_model().init_parameters(rng);
    for (std::size_t i = 98; i < 101; ++i)
      w[i] = rng.uniform(-0.5, 0.5);
    CicLoss loss;
    loss.cic = { rng.uniform(0.3, 2.0), rng.uniform(), std::pow(10.0, rng.uniform(-12, -2)), rng.uniform(0.4, 2.0) };
    if (t % 2)
      loss.marginal.kind = MarginalKind::kde;
    loss.metric.lambda = rng.uniform();
    const FrozenTransform ft = build_transform(loss, small_model().residuals(w, b));
    const EvalOut ev = cic_gradient(loss.cic, small_model(), w, b, ft.marginals, ft.metric);
    REQUIRE(ev.gradient.size() == 101);
    const Vector fd = central_differences(
      [&](const Vector& x) { return cic_value(loss.cic, small_model(), x, b, ft.marginals, ft.metric); }, w, 1e-6);
    CHECK(max_rel_error(ev.gradient, fd) <= 1e-5);
  }
  CHECK(check_gradient_oracle(20, 1e-5, 3).passed);
}

TEST_CASE("objective bounds")
{
  CHECK(check_objective_bounds(200, 9).passed);
}

TEST_CASE("baselines at zero residual")
{
  const Vector d{ 0.4, -1.0, 2.0 };
  const Batch b = single(d);
  const Vector w = bias_only(d);
  const std::vector<std::pair<ObjectiveSpec, double>> cases{
    { MseLoss{}, 0.0 }, { HuberLoss{ 1.0 }, 0.0 }, { StudentTLoss{ 3.0, 1.0 }, 0.0 }, { MccLoss{ 0.8 }, -1.0 }
  };
  for (const auto& [spec, minimum] : cases) {
    const EvalOut ev = baseline_value_and_gradient(spec, small_model(), w, b);
    CHECK(ev.value == minimum);
    for (double g : ev.gradient)
      CHECK(g == 0.0);
  }
}

TEST_CASE("baseline closed forms")
{
  // e = (2, 0, 0) from a zero model
  const Batch b = single(Vector{ 2.0, 0.0, 0.0 });
  const Vector w(small_model().parameter_count(), 0.0);
  for (const double dh : { 1.0, 0.5 }) {
    const EvalOut hub = baseline_value_and_gradient(HuberLoss{ dh }, small_model(), Vector(101, 0.0),
                                                    single(Vector{ 2 * dh, 0, 0 }));
    CHECK(hub.value == doctest::Approx(1.5 * dh * dh));
    // de/db2 = -1
    CHECK(hub.gradient[98] == doctest::Approx(-dh));
  }
  CHECK(baseline_value_and_gradient(MseLoss{}, small_model(), w, b).value == doctest::Approx(2.0));
  CHECK(baseline_value_and_gradient(StudentTLoss{ 3.0, 1.0 }, small_model(), w, b).value ==
        doctest::Approx(2.0 * std::log1p(4.0 / 3.0)));
  CHECK(baseline_value_and_gradient(MccLoss{ 1.0 }, small_model(), w, b).value ==
        doctest::Approx(-std::exp(-2.0)));
}

TEST_CASE("baseline gradients match finite differences")
{
  SeededRng rng(53);
  const std::vector<ObjectiveSpec> specs{ MseLoss{}, HuberLoss{ 1.0 }, HuberLoss{ 0.3 }, StudentTLoss{ 3.0, 1.0 },
                                          StudentTLoss{ 1.5, 0.4 }, MccLoss{ 0.8 } };
  for (const auto& spec : specs)
    for (int t = 0; t < 20; ++t) {
      const Batch b = random_batch(rng, 20);
      const Vector w = small_model().init_parameters(rng);
      const EvalOut ev = baseline_value_and_gradient(spec, small_model(), w, b);
      const Vector fd = central_differences(
        [&](const Vector& x) { return baseline_value_and_gradient(spec, small_model(), x, b).value; }, w, 1e-6);
      CHECK(max_rel_error(ev.gradient, fd) <= 1e-5);
    }
}

TEST_CASE("model objective refresh and evaluate")
{
  SeededRng rng(54);
  const Batch b = random_batch(rng, 30);
  const Vector w0 = small_model().init_parameters(rng);
  const CicLoss loss;
  ModelObjective obj(small_model(), b, loss);
  CHECK(obj.dimension() == 101);
  CHECK_FALSE(obj.transform().has_value());
  const Evaluation lazy = obj.evaluate(w0);
  REQUIRE(obj.transform().has_value());
  const FrozenTransform ft = build_transform(loss, small_model().residuals(w0, b));
  const EvalOut direct = cic_gradient(loss.cic, small_model(), w0, b, ft.marginals, ft.metric);
  CHECK(lazy.value == direct.value);
  CHECK(lazy.gradient == direct.gradient);

  // Frozen between refreshes: moving w does not change the metric.
  Vector w1 = w0;
  w1[0] += 0.3;
  const DenseMatrix before = obj.transform()->metric.sigma();
  (void)obj.evaluate(w1);
  CHECK(obj.transform()->metric.sigma() == before);
  obj.refresh(w1);
  CHECK_FALSE(obj.transform()->metric.sigma() == before);

  ModelObjective mse(small_model(), b, MseLoss{});
  mse.refresh(w0);
  CHECK_FALSE(mse.transform().has_value());
}

TEST_CASE("build_transform uses clipped copula residuals")
{
  SeededRng rng(55);
  DenseMatrix e(40, 3);
  for (std::size_t n = 0; n < 40; ++n)
    for (std::size_t i = 0; i < 3; ++i)
      e(n, i) = n == 0 ? 1e12 : rng.normal();
  CicLoss loss;
  const FrozenTransform ft = build_transform(loss, e);
  DenseMatrix u(40, 3);
  for (std::size_t n = 0; n < 40; ++n) {
    const CopulaPoint pt = ft.marginals.transform(e.row(n));
    for (std::size_t i = 0; i < 3; ++i)
      u(n, i) = pt.u[i];
  }
  CHECK(u(0, 0) == 1.0 - 1e-6);
  const CopulaMetric expect = estimate_metric(u, loss.metric.lambda, loss.metric.ridge);
  CHECK(ft.metric.sigma() == expect.sigma());
}
