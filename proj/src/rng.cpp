#include "cicg/rng.hpp"

#include "cicg/error.hpp"

#include <cmath>

namespace cicg {

namespace {

constexpr std::uint64_t kPhiloxMultiplier = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kPhiloxWeyl = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

__extension__ typedef unsigned __int128 u128;

} // namespace

std::array<std::uint64_t, 2> SeededRng::philox(std::array<std::uint64_t, 2> counter,
                                               std::uint64_t key)
{
  for (int round = 0; round < 10; ++round) {
    const u128 prod = static_cast<u128>(kPhiloxMultiplier) * counter[0];
    const auto hi = static_cast<std::uint64_t>(prod >> 64);
    const auto lo = static_cast<std::uint64_t>(prod);
    counter = { hi ^ key ^ counter[1], lo };
    key += kPhiloxWeyl;
  }
  return counter;
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream)
  : seed_(seed)
  , stream_(stream)
  , key_(splitmix64(seed))
{}

std::uint64_t SeededRng::next_u64()
{
  if (block_used_ == 2) {
    block_ = philox({ position_++, stream_ }, key_);
    block_used_ = 0;
  }
  return block_[block_used_++];
}

double SeededRng::uniform()
{
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform_open()
{
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededRng::normal()
{
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * m;
  has_spare_normal_ = true;
  return u * m;
}

double SeededRng::gamma(double shape)
{
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw InvalidParameter("SeededRng::gamma: shape must be positive and finite");
  if (shape < 1.0) {
    // G(a) = G(a + 1) * U^(1/a)
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2)
      return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
      return d * v;
  }
}

} // namespace cicg
