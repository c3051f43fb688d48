#pragma once

#include "cicg/dense.hpp"
#include "cicg/rng.hpp"

#include <cstddef>
#include <span>

namespace cicg {

struct MlpSpec
{
  std::size_t input_dim = 3;
  std::size_t hidden = 14;
  std::size_t output_dim = 3;

  /// q = d*hidden + hidden + hidden*p + p
  std::size_t parameter_count() const;
  void validate() const;
};

/// Flattened weights. Layout: W1 (hidden x d, row-major), b1 (hidden),
/// W2 (p x hidden, row-major), b2 (p).
using ParameterVector = Vector;

/// Paired inputs (N x d) and targets (N x p).
struct Batch
{
  DenseMatrix inputs;
  DenseMatrix targets;

  std::size_t size() const { return inputs.rows(); }
  void validate(const MlpSpec& spec) const;
};

/// One-hidden-layer tanh network y = W2 tanh(W1 x + b1) + b2.
class Mlp
{
public:
  explicit Mlp(MlpSpec spec);

  const MlpSpec& spec() const { return spec_; }
  std::size_t parameter_count() const { return spec_.parameter_count(); }

  Vector forward(std::span<const double> w, std::span<const double> x) const;

  /// Forward pass that also returns the hidden activations needed by
  /// accumulate_jtv. `hidden` must have length spec().hidden.
  void forward(std::span<const double> w,
               std::span<const double> x,
               std::span<double> hidden,
               std::span<double> out) const;

  /// e_n = d_n - f(x_n; w), one row per sample.
  DenseMatrix residuals(std::span<const double> w, const Batch& batch) const;

  /// J^T v with J = dy/dw at (x, w), by reverse accumulation.
  Vector jacobian_transpose_product(std::span<const double> w,
                                    std::span<const double> x,
                                    std::span<const double> v) const;

  /// grad += scale * J^T v, reusing hidden activations from forward().
  void accumulate_jtv(std::span<const double> w,
                      std::span<const double> x,
                      std::span<const double> hidden,
                      std::span<const double> v,
                      double scale,
                      std::span<double> grad) const;

  /// Uniform Glorot weights on +-sqrt(6 / (fan_in + fan_out)), zero biases.
  ParameterVector init_parameters(SeededRng& rng) const;

private:
  void check_dims(std::span<const double> w, std::span<const double> x) const;

  MlpSpec spec_;
  std::size_t off_b1_, off_w2_, off_b2_;
};

} // namespace cicg
