#include "cicg/datagen.hpp"

#include "cicg/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace cicg {

namespace {

// Stream ids within one seed. Noise streams are offset so run indices never
// collide with the input streams.
constexpr std::uint64_t kTrainInputStream = 1;
constexpr std::uint64_t kTestInputStream = 2;
constexpr std::uint64_t kNoiseStreamBase = 1ULL << 32;

DenseMatrix uniform_inputs(std::size_t n, SeededRng& rng)
{
  DenseMatrix x(n, 3);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      x(r, c) = rng.uniform(-1.0, 1.0);
  return x;
}

DenseMatrix clean_targets(const DenseMatrix& x)
{
  DenseMatrix d(x.rows(), 3);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const Vector t = benchmark_targets(x.row(r));
    for (std::size_t c = 0; c < 3; ++c)
      d(r, c) = t[c];
  }
  return d;
}

} // namespace

void NoiseSpec::validate() const
{
  if (!(nu > 0.0))
    throw InvalidParameter("NoiseSpec: nu must be positive");
  if (!(sigma_eps > 0.0))
    throw InvalidParameter("NoiseSpec: sigma_eps must be positive");
  if (!(rho >= 0.0 && rho < 1.0))
    throw InvalidParameter("NoiseSpec: rho must lie in [0, 1)");
  if (dim < 1)
    throw InvalidParameter("NoiseSpec: dimension must be at least 1");
}

DenseMatrix NoiseSpec::correlation() const
{
  DenseMatrix r(dim, dim, rho);
  for (std::size_t i = 0; i < dim; ++i)
    r(i, i) = 1.0;
  return r;
}

Vector benchmark_targets(std::span<const double> x)
{
  if (x.size() != 3)
    throw DimensionMismatch("benchmark_targets: input must be a 3-vector");
  return {
    std::sin(1.2 * x[0] * x[1]) + 0.2 * std::cos(2.0 * x[2]),
    std::cos(1.0 * x[1] * x[2]) + 0.3 * std::sin(1.5 * x[0]),
    x[0] * x[0] - x[2] + 0.15 * std::sin(2.2 * x[1]),
  };
}

DenseMatrix sample_noise(const NoiseSpec& spec, std::size_t n, SeededRng& rng)
{
  spec.validate();
  const CholeskyFactor chol = cholesky(spec.correlation());
  const DenseMatrix& l = chol.lower();
  const std::size_t p = spec.dim;
  DenseMatrix out(n, p);
  Vector g(p);
  for (std::size_t r = 0; r < n; ++r) {
    for (auto& v : g)
      v = rng.normal();
    const double mix = std::sqrt(rng.chi_square(spec.nu) / spec.nu);
    for (std::size_t i = 0; i < p; ++i) {
      double z = 0.0;
      for (std::size_t k = 0; k <= i; ++k)
        z += l(i, k) * g[k];
      out(r, i) = spec.sigma_eps * z / mix;
    }
  }
  return out;
}

Dataset make_dataset(std::uint64_t seed,
                     const NoiseSpec& noise,
                     std::uint64_t noise_stream,
                     DatasetSizes sizes)
{
  noise.validate();
  if (noise.dim != 3)
    throw InvalidParameter("make_dataset: the benchmark mapping has three outputs");
  SeededRng train_rng(seed, kTrainInputStream);
  SeededRng test_rng(seed, kTestInputStream);
  SeededRng noise_rng(seed, kNoiseStreamBase + noise_stream);

  Dataset ds;
  DenseMatrix x_train = uniform_inputs(sizes.train, train_rng);
  DenseMatrix x_test = uniform_inputs(sizes.test, test_rng);
  ds.train_clean = clean_targets(x_train);
  ds.train_noise = sample_noise(noise, sizes.train, noise_rng);
  ds.train = { std::move(x_train), ds.train_clean + ds.train_noise };
  DenseMatrix d_test = clean_targets(x_test);
  ds.test = { std::move(x_test), std::move(d_test) };
  return ds;
}

void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path)
{
  std::ofstream os(path);
  if (!os)
    throw IoError("write_dataset_csv: cannot open " + path.string());
  os << "split,x1,x2,x3,d1,d2,d3,d1n,d2n,d3n\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    os << buf;
  };
  for (std::size_t r = 0; r < ds.train.size(); ++r) {
    os << "train";
    for (std::size_t c = 0; c < 3; ++c)
      put(ds.train.inputs(r, c));
    for (std::size_t c = 0; c < 3; ++c)
      put(ds.train_clean(r, c));
    for (std::size_t c = 0; c < 3; ++c)
      put(ds.train.targets(r, c));
    os << '\n';
  }
  for (std::size_t r = 0; r < ds.test.size(); ++r) {
    os << "test";
    for (std::size_t c = 0; c < 3; ++c)
      put(ds.test.inputs(r, c));
    for (std::size_t c = 0; c < 3; ++c)
      put(ds.test.targets(r, c));
    for (std::size_t c = 0; c < 3; ++c)
      put(ds.test.targets(r, c));
    os << '\n';
  }
  if (!os)
    throw IoError("write_dataset_csv: write failed for " + path.string());
}

} // namespace cicg
