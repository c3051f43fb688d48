#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cicg {

using Vector = std::vector<double>;

//! Small row-major dense matrix. Sized for the p x p metrics and N x p
//! residual tables used here, not for BLAS-scale work.
class DenseMatrix
{
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return { entries_.data() + r * cols_, cols_ }; }
  std::span<const double> row(std::size_t r) const
  {
    return { entries_.data() + r * cols_, cols_ };
  }
  Vector column(std::size_t c) const;

  const std::vector<double>& entries() const { return entries_; }

  DenseMatrix transpose() const;
  double trace() const;
  bool is_symmetric(double tol = 1e-12) const;
  bool all_finite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);
Vector operator*(const DenseMatrix& a, std::span<const double> x);

double frobenius_norm(const DenseMatrix& a);

/// Lower-triangular factor L with L L^T equal to the source matrix.
class CholeskyFactor
{
public:
  explicit CholeskyFactor(DenseMatrix lower);

  const DenseMatrix& lower() const { return lower_; }
  std::size_t dim() const { return lower_.rows(); }
  DenseMatrix reconstruct() const;

private:
  DenseMatrix lower_;
};

/// Throws NotPositiveDefinite when a pivot is not strictly positive and
/// InvalidParameter when `m` is not square and symmetric within 1e-12.
CholeskyFactor cholesky(const DenseMatrix& m);

/// Solves (L L^T) x = b.
Vector solve_spd(const CholeskyFactor& f, std::span<const double> b);

/// Eigenvalues of a small symmetric matrix (cyclic Jacobi), ascending.
Vector symmetric_eigenvalues(const DenseMatrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// y += s * x
void axpy(double s, std::span<const double> x, std::span<double> y);

} // namespace cicg
