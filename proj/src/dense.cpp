#include "cicg/dense.hpp"

#include "cicg/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cicg {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(what) + ": shape mismatch");
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
  : rows_(rows)
  , cols_(cols)
  , entries_(rows * cols, fill)
{}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
  : rows_(rows)
  , cols_(cols)
  , entries_(std::move(entries))
{
  if (entries_.size() != rows * cols)
    throw DimensionMismatch("DenseMatrix: entry count does not match rows x cols");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
  : rows_(rows.size())
  , cols_(rows.size() == 0 ? 0 : rows.begin()->size())
{
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_)
      throw DimensionMismatch("DenseMatrix: ragged initializer");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag)
{
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i)
    m(i, i) = diag[i];
  return m;
}

Vector DenseMatrix::column(std::size_t c) const
{
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    out[r] = (*this)(r, c);
  return out;
}

DenseMatrix DenseMatrix::transpose() const
{
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      t(c, r) = (*this)(r, c);
  return t;
}

double DenseMatrix::trace() const
{
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
    s += (*this)(i, i);
  return s;
}

bool DenseMatrix::is_symmetric(double tol) const
{
  if (rows_ != cols_)
    return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if (std::abs((*this)(r, c) - (*this)(c, r)) > tol)
        return false;
  return true;
}

bool DenseMatrix::all_finite() const
{
  return std::all_of(entries_.begin(), entries_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b)
{
  if (a.cols() != b.rows())
    throw DimensionMismatch("matrix product: inner dimensions differ");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j)
        out(i, j) += aik * b(k, j);
    }
  return out;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b)
{
  require_same_shape(a, b, "matrix sum");
  std::vector<double> e(a.entries());
  for (std::size_t i = 0; i < e.size(); ++i)
    e[i] += b.entries()[i];
  return DenseMatrix(a.rows(), a.cols(), std::move(e));
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b)
{
  require_same_shape(a, b, "matrix difference");
  std::vector<double> e(a.entries());
  for (std::size_t i = 0; i < e.size(); ++i)
    e[i] -= b.entries()[i];
  return DenseMatrix(a.rows(), a.cols(), std::move(e));
}

DenseMatrix operator*(double s, const DenseMatrix& a)
{
  std::vector<double> e(a.entries());
  for (auto& v : e)
    v *= s;
  return DenseMatrix(a.rows(), a.cols(), std::move(e));
}

Vector operator*(const DenseMatrix& a, std::span<const double> x)
{
  if (a.cols() != x.size())
    throw DimensionMismatch("matrix-vector product: size mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    y[i] = dot(a.row(i), x);
  return y;
}

double frobenius_norm(const DenseMatrix& a)
{
  double s = 0.0;
  for (double v : a.entries())
    s += v * v;
  return std::sqrt(s);
}

CholeskyFactor::CholeskyFactor(DenseMatrix lower)
  : lower_(std::move(lower))
{
  if (lower_.rows() != lower_.cols())
    throw DimensionMismatch("CholeskyFactor: factor must be square");
  for (std::size_t i = 0; i < lower_.rows(); ++i)
    if (!(lower_(i, i) > 0.0))
      throw NotPositiveDefinite("CholeskyFactor: non-positive diagonal");
}

DenseMatrix CholeskyFactor::reconstruct() const
{
  return lower_ * lower_.transpose();
}

CholeskyFactor cholesky(const DenseMatrix& m)
{
  if (!m.is_symmetric(1e-12))
    throw InvalidParameter("cholesky: matrix is not square and symmetric");
  const std::size_t n = m.rows();
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (std::size_t k = 0; k < j; ++k)
      pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0))
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(j) +
                                " is not positive");
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k)
        s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return CholeskyFactor(std::move(l));
}

Vector solve_spd(const CholeskyFactor& f, std::span<const double> b)
{
  const DenseMatrix& l = f.lower();
  const std::size_t n = l.rows();
  if (b.size() != n)
    throw DimensionMismatch("solve_spd: right-hand side has wrong length");
  Vector x(b.begin(), b.end());
  // L y = b
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k)
      s -= l(i, k) * x[k];
    x[i] = s / l(i, i);
  }
  // L^T x = y
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k)
      s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

Vector symmetric_eigenvalues(const DenseMatrix& m)
{
  if (!m.is_symmetric(1e-9))
    throw InvalidParameter("symmetric_eigenvalues: matrix is not symmetric");
  DenseMatrix a = m;
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        off += a(p, q) * a(p, q);
    if (off < 1e-30 * (1.0 + frobenius_norm(a)))
      break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0)
          continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  Vector ev(n);
  for (std::size_t i = 0; i < n; ++i)
    ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double dot(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size())
    throw DimensionMismatch("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a)
{
  double s = 0.0;
  for (double v : a)
    s += v * v;
  return std::sqrt(s);
}

void axpy(double s, std::span<const double> x, std::span<double> y)
{
  if (x.size() != y.size())
    throw DimensionMismatch("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] += s * x[i];
}

} // namespace cicg
