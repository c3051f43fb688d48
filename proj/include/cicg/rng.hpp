#pragma once

#include <array>
#include <cstdint>

namespace cicg {

/// Counter-based generator (Philox2x64-10). A draw is a pure function of
/// (key, stream, position), so substreams derived from distinct stream ids
/// never overlap and do not depend on scheduling.
class SeededRng
{
public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Independent substream of the same seed, e.g. one per Monte Carlo run.
  SeededRng substream(std::uint64_t stream) const { return SeededRng(seed_, stream); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Gamma(shape, 1) by Marsaglia-Tsang squeeze rejection.
  double gamma(double shape);
  double chi_square(double dof) { return 2.0 * gamma(0.5 * dof); }

  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{ 0 }; }
  result_type operator()() { return next_u64(); }

  static std::array<std::uint64_t, 2> philox(std::array<std::uint64_t, 2> counter,
                                             std::uint64_t key);

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> block_{};
  int block_used_ = 2;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

} // namespace cicg
