#pragma once

#include <span>

namespace cicg {

/// Linear-interpolation quantile of the order statistics: position (n - 1) p,
/// interpolated between the neighbouring sorted values.
/// Throws EmptyInput for an empty sequence, InvalidParameter for p outside [0, 1].
double empirical_quantile(std::span<const double> values, double p);

double mean(std::span<const double> values);
/// Sample standard deviation, 1/(n - 1) normalization; zero for n < 2.
double standard_deviation(std::span<const double> values);

} // namespace cicg
