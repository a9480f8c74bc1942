#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace urn {

using Vector = std::vector<double>;

/// Row-major dense real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vector col(std::size_t c) const;

  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Row vector times matrix: (x^T A)^T.
Vector left_multiply(std::span<const double> x, const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
Vector row_sums(const Matrix& a);

/// (b o_L A)^{ij} = b^i A^{ij}; b has one entry per row of A.
Matrix hadamard_left(std::span<const double> b, const Matrix& a);

/// (A o_R b)^{ij} = A^{ij} b^j; b has one entry per column of A.
Matrix hadamard_right(const Matrix& a, std::span<const double> b);

/// Largest singular value, by power iteration on A^T A.
///
/// Starts from the all-ones vector and repeats from a fixed pseudo-random
/// vector; the larger estimate is returned, so a start vector orthogonal to the
/// top singular direction cannot hide it. Relative accuracy is about 1e-9.
/// Throws NonConvergence after 1e5 iterations.
double operator_norm(const Matrix& a);

struct RowNormBounds {
  double max_row_norm;
  double op_norm;
};

/// Largest Euclidean row norm and the operator norm of a square matrix.
/// These satisfy max_row_norm <= op_norm <= sqrt(n) * max_row_norm.
RowNormBounds row_norm_bounds(const Matrix& a);

struct EigenDecomposition {
  Vector values;
  Matrix vectors;  // column k pairs with values[k]
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Sweeps until the off-diagonal Frobenius mass drops below 1e-13 * ||S||_F.
/// Eigenvalues are returned in descending order with orthonormal vectors.
/// Throws NotSymmetric if ||S - S^T||_max >= 1e-10, NonConvergence after 100
/// sweeps.
EigenDecomposition jacobi_eigs(const Matrix& s);

}  // namespace urn
