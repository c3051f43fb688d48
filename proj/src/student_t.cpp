#include "cicg/student_t.hpp"

#include "cicg/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cicg {

namespace {

void check_params(double nu, double scale)
{
  if (!(nu > 0.0) || !(scale > 0.0) || std::isnan(nu) || std::isnan(scale))
    throw InvalidParameter("student_t: nu and scale must be positive");
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b)
{
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny)
    d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny)
      d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny)
      c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny)
      d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny)
      c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps)
      break;
  }
  return h;
}

// I_x(a,b) with y = 1 - x supplied separately to keep precision near x = 1.
double incomplete_beta_xy(double x, double y, double a, double b)
{
  if (x <= 0.0)
    return 0.0;
  if (y <= 0.0)
    return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(y, b, a) / b;
}

} // namespace

double incomplete_beta(double x, double a, double b)
{
  if (!(a > 0.0) || !(b > 0.0))
    throw InvalidParameter("incomplete_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0))
    throw InvalidParameter("incomplete_beta: x must lie in [0, 1]");
  return incomplete_beta_xy(x, 1.0 - x, a, b);
}

double student_t_cdf(double x, double nu, double scale)
{
  check_params(nu, scale);
  if (std::isnan(x))
    return x;
  if (std::isinf(x))
    return x > 0 ? 1.0 : 0.0;
  const double t = x / scale;
  if (t == 0.0)
    return 0.5;
  const double t2 = t * t;
  // P(|T| > |t|) = I_{nu/(nu+t^2)}(nu/2, 1/2)
  const double xb = nu / (nu + t2);
  const double yb = t2 / (nu + t2);
  const double tail = 0.5 * incomplete_beta_xy(xb, yb, 0.5 * nu, 0.5);
  return t > 0 ? 1.0 - tail : tail;
}

double student_t_pdf(double x, double nu, double scale)
{
  check_params(nu, scale);
  const double t = x / scale;
  const double log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                          0.5 * std::log(nu * std::numbers::pi) - std::log(scale);
  return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(t * t / nu));
}

double student_t_quantile(double p, double nu, double scale)
{
  check_params(nu, scale);
  if (!(p > 0.0 && p < 1.0))
    throw InvalidParameter("student_t_quantile: p must lie in (0, 1)");
  if (p == 0.5)
    return 0.0;

  // Work on the standardized variable; bracket then bisect + Newton.
  double lo = -1.0;
  double hi = 1.0;
  while (student_t_cdf(lo, nu) > p)
    lo *= 2.0;
  while (student_t_cdf(hi, nu) < p)
    hi *= 2.0;

  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 300; ++iter) {
    const double f = student_t_cdf(t, nu) - p;
    if (f == 0.0)
      break;
    if (f < 0.0)
      lo = t;
    else
      hi = t;
    const double dens = student_t_pdf(t, nu);
    double next = t - f / dens;
    if (!(next > lo && next < hi) || !std::isfinite(next))
      next = 0.5 * (lo + hi);
    const double step = std::abs(next - t);
    t = next;
    if (step <= 1e-12 * std::max(1.0, std::abs(t)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(t)))
      break;
  }
  return t * scale;
}

} // namespace cicg
