#include "cicg/stats.hpp"

#include "cicg/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cicg {

double empirical_quantile(std::span<const double> values, double p)
{
  if (values.empty())
    throw EmptyInput("empirical_quantile: empty sequence");
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidParameter("empirical_quantile: p must lie in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double mean(std::span<const double> values)
{
  if (values.empty())
    throw EmptyInput("mean: empty sequence");
  double s = 0.0;
  for (double v : values)
    s += v;
  return s / static_cast<double>(values.size());
}

double standard_deviation(std::span<const double> values)
{
  if (values.size() < 2)
    return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values)
    ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

} // namespace cicg
