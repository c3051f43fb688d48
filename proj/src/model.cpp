#include "cicg/model.hpp"

#include "cicg/error.hpp"

#include <cmath>
#include <string>

namespace cicg {

std::size_t MlpSpec::parameter_count() const
{
  return input_dim * hidden + hidden + hidden * output_dim + output_dim;
}

void MlpSpec::validate() const
{
  if (input_dim < 1 || hidden < 1 || output_dim < 1)
    throw InvalidParameter("MlpSpec: all layer sizes must be at least 1");
}

void Batch::validate(const MlpSpec& spec) const
{
  if (inputs.rows() != targets.rows())
    throw DimensionMismatch("Batch: inputs and targets have different sample counts");
  if (inputs.cols() != spec.input_dim || targets.cols() != spec.output_dim)
    throw DimensionMismatch("Batch: column counts do not match the model");
  if (!inputs.all_finite() || !targets.all_finite())
    throw InvalidParameter("Batch: non-finite entries");
}

Mlp::Mlp(MlpSpec spec)
  : spec_(spec)
{
  spec_.validate();
  off_b1_ = spec_.input_dim * spec_.hidden;
  off_w2_ = off_b1_ + spec_.hidden;
  off_b2_ = off_w2_ + spec_.hidden * spec_.output_dim;
}

void Mlp::check_dims(std::span<const double> w, std::span<const double> x) const
{
  if (w.size() != parameter_count())
    throw DimensionMismatch("Mlp: parameter vector has length " + std::to_string(w.size()) +
                            ", expected " + std::to_string(parameter_count()));
  if (x.size() != spec_.input_dim)
    throw DimensionMismatch("Mlp: input has wrong dimension");
}

void Mlp::forward(std::span<const double> w,
                  std::span<const double> x,
                  std::span<double> hidden,
                  std::span<double> out) const
{
  const std::size_t d = spec_.input_dim;
  const std::size_t h = spec_.hidden;
  const std::size_t p = spec_.output_dim;
  for (std::size_t j = 0; j < h; ++j) {
    double a = w[off_b1_ + j];
    const double* wj = w.data() + j * d;
    for (std::size_t i = 0; i < d; ++i)
      a += wj[i] * x[i];
    hidden[j] = std::tanh(a);
  }
  for (std::size_t k = 0; k < p; ++k) {
    double y = w[off_b2_ + k];
    const double* wk = w.data() + off_w2_ + k * h;
    for (std::size_t j = 0; j < h; ++j)
      y += wk[j] * hidden[j];
    out[k] = y;
  }
}

Vector Mlp::forward(std::span<const double> w, std::span<const double> x) const
{
  check_dims(w, x);
  Vector hidden(spec_.hidden);
  Vector out(spec_.output_dim);
  forward(w, x, hidden, out);
  return out;
}

DenseMatrix Mlp::residuals(std::span<const double> w, const Batch& batch) const
{
  batch.validate(spec_);
  if (w.size() != parameter_count())
    throw DimensionMismatch("Mlp::residuals: parameter vector has wrong length");
  DenseMatrix e(batch.size(), spec_.output_dim);
  Vector hidden(spec_.hidden);
  Vector out(spec_.output_dim);
  for (std::size_t n = 0; n < batch.size(); ++n) {
    forward(w, batch.inputs.row(n), hidden, out);
    for (std::size_t k = 0; k < spec_.output_dim; ++k)
      e(n, k) = batch.targets(n, k) - out[k];
  }
  return e;
}

void Mlp::accumulate_jtv(std::span<const double> w,
                         std::span<const double> x,
                         std::span<const double> hidden,
                         std::span<const double> v,
                         double scale,
                         std::span<double> grad) const
{
  const std::size_t d = spec_.input_dim;
  const std::size_t h = spec_.hidden;
  const std::size_t p = spec_.output_dim;
  for (std::size_t k = 0; k < p; ++k) {
    const double vk = scale * v[k];
    grad[off_b2_ + k] += vk;
    double* gk = grad.data() + off_w2_ + k * h;
    for (std::size_t j = 0; j < h; ++j)
      gk[j] += vk * hidden[j];
  }
  for (std::size_t j = 0; j < h; ++j) {
    double back = 0.0;
    for (std::size_t k = 0; k < p; ++k)
      back += w[off_w2_ + k * h + j] * v[k];
    const double delta = scale * back * (1.0 - hidden[j] * hidden[j]);
    grad[off_b1_ + j] += delta;
    double* gj = grad.data() + j * d;
    for (std::size_t i = 0; i < d; ++i)
      gj[i] += delta * x[i];
  }
}

Vector Mlp::jacobian_transpose_product(std::span<const double> w,
                                       std::span<const double> x,
                                       std::span<const double> v) const
{
  check_dims(w, x);
  if (v.size() != spec_.output_dim)
    throw DimensionMismatch("Mlp::jacobian_transpose_product: v has wrong length");
  Vector hidden(spec_.hidden);
  Vector out(spec_.output_dim);
  forward(w, x, hidden, out);
  Vector grad(parameter_count(), 0.0);
  accumulate_jtv(w, x, hidden, v, 1.0, grad);
  return grad;
}

ParameterVector Mlp::init_parameters(SeededRng& rng) const
{
  const std::size_t d = spec_.input_dim;
  const std::size_t h = spec_.hidden;
  const std::size_t p = spec_.output_dim;
  ParameterVector w(parameter_count(), 0.0);
  const double limit1 = std::sqrt(6.0 / static_cast<double>(d + h));
  for (std::size_t i = 0; i < d * h; ++i)
    w[i] = rng.uniform(-limit1, limit1);
  const double limit2 = std::sqrt(6.0 / static_cast<double>(h + p));
  for (std::size_t i = 0; i < h * p; ++i)
    w[off_w2_ + i] = rng.uniform(-limit2, limit2);
  return w;
}

} // namespace cicg
