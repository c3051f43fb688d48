#pragma once

#include "cicg/dense.hpp"
#include "cicg/model.hpp"
#include "cicg/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <span>

namespace cicg {

/// Multivariate Student's-t noise sigma_eps * T with equicorrelation
/// R = (1 - rho) I + rho 1 1^T.
struct NoiseSpec
{
  double nu = 2.2;
  double sigma_eps = 0.35;
  double rho = 0.85;
  std::size_t dim = 3;

  void validate() const;
  DenseMatrix correlation() const;
};

/// Three-output nonlinear benchmark mapping of a 3-vector.
Vector benchmark_targets(std::span<const double> x);

/// n x dim noise draws: z = L g (L L^T = R, g standard normal),
/// w = chi2(nu) / nu, T = z / sqrt(w), eps = sigma_eps T.
DenseMatrix sample_noise(const NoiseSpec& spec, std::size_t n, SeededRng& rng);

struct DatasetSizes
{
  std::size_t train = 600;
  std::size_t test = 600;
};

struct Dataset
{
  Batch train;       //!< noisy targets
  Batch test;        //!< clean targets
  DenseMatrix train_clean;
  DenseMatrix train_noise;
};

/// Inputs uniform on [-1, 1]^3. Train and test inputs depend only on `seed`;
/// the training noise is drawn from the substream of `noise_stream`, so runs
/// of one seed share inputs and the clean test set.
Dataset make_dataset(std::uint64_t seed,
                     const NoiseSpec& noise,
                     std::uint64_t noise_stream = 0,
                     DatasetSizes sizes = {});

/// CSV with columns x1..x3, d1..d3 (clean), d1n..d3n (noisy); the split
/// column marks train / test rows.
void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path);

} // namespace cicg
