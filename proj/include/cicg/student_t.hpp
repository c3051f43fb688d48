#pragma once

namespace cicg {

/// Regularized incomplete beta I_x(a, b) for x in [0, 1].
double incomplete_beta(double x, double a, double b);

// Location-zero Student's-t with `nu` degrees of freedom and scale `scale`.
// All throw InvalidParameter for nu <= 0 or scale <= 0.
double student_t_cdf(double x, double nu, double scale = 1.0);
double student_t_pdf(double x, double nu, double scale = 1.0);
/// Inverse CDF for p in (0, 1): bracketed bisection with Newton polish.
double student_t_quantile(double p, double nu, double scale = 1.0);

} // namespace cicg
