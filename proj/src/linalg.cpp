#include "urn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "urn/error.hpp"
#include "urn/rng.hpp"

namespace urn {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::DimensionMismatch, std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                             "x" + std::to_string(b.cols()));
  }
}

}  // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(Errc::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vector Matrix::col(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(Errc::DimensionMismatch, "matrix product: inner dimensions " + std::to_string(a.cols()) +
                                             " and " + std::to_string(b.rows()));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw Error(Errc::DimensionMismatch, "matrix-vector product: " + std::to_string(a.cols()) + " columns, " +
                                             std::to_string(x.size()) + " entries");
  }
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
  return out;
}

Vector left_multiply(std::span<const double> x, const Matrix& a) {
  if (a.rows() != x.size()) {
    throw Error(Errc::DimensionMismatch, "vector-matrix product: " + std::to_string(x.size()) + " entries, " +
                                             std::to_string(a.rows()) + " rows");
  }
  Vector out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += x[i] * a(i, j);
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::DimensionMismatch,
                "dot product of lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double frobenius_norm(const Matrix& a) { return norm2(a.data()); }

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

Vector row_sums(const Matrix& a) {
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    out[i] = std::accumulate(r.begin(), r.end(), 0.0);
  }
  return out;
}

Matrix hadamard_left(std::span<const double> b, const Matrix& a) {
  if (b.size() != a.rows()) {
    throw Error(Errc::DimensionMismatch, "left-Hadamard: vector of length " + std::to_string(b.size()) +
                                             " against " + std::to_string(a.rows()) + " rows");
  }
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (double& v : out.row(i)) v *= b[i];
  }
  return out;
}

Matrix hadamard_right(const Matrix& a, std::span<const double> b) {
  if (b.size() != a.cols()) {
    throw Error(Errc::DimensionMismatch, "right-Hadamard: vector of length " + std::to_string(b.size()) +
                                             " against " + std::to_string(a.cols()) + " columns");
  }
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) r[j] *= b[j];
  }
  return out;
}

namespace {

constexpr int kPowerIterationBudget = 100000;

// Power iteration on A^T A from `start`; returns sqrt of the converged Rayleigh
// quotient, or 0 when the iterate collapses onto the null space.
double power_iterate(const Matrix& a, Vector v) {
  const double start_norm = norm2(v);
  if (start_norm == 0.0) return 0.0;
  for (double& x : v) x /= start_norm;

  for (int iter = 0; iter < kPowerIterationBudget; ++iter) {
    const Vector y = a * v;
    const Vector w = left_multiply(y, a);
    const double rho = dot(y, y);
    if (rho == 0.0) return 0.0;
    double residual_sq = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double r = w[k] - rho * v[k];
      residual_sq += r * r;
    }
    // Symmetric residual bound: some eigenvalue of A^T A lies within |r| of rho.
    if (std::sqrt(residual_sq) <= 1e-10 * rho) return std::sqrt(rho);
    const double wn = norm2(w);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = w[k] / wn;
  }
  throw Error(Errc::NonConvergence,
              "operator norm power iteration exceeded " + std::to_string(kPowerIterationBudget) + " iterations");
}

}  // namespace

double operator_norm(const Matrix& a) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw Error(Errc::DomainError, "operator norm of a matrix with non-finite entries");
  }
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (max_abs(a) == 0.0) return 0.0;

  const double from_ones = power_iterate(a, Vector(a.cols(), 1.0));

  Rng rng(0x5EEDF00DULL);
  Vector scrambled(a.cols());
  for (double& x : scrambled) x = 2.0 * rng.uniform() - 1.0;
  const double from_random = power_iterate(a, std::move(scrambled));

  return std::max(from_ones, from_random);
}

RowNormBounds row_norm_bounds(const Matrix& a) {
  if (!a.square()) {
    throw Error(Errc::DimensionMismatch,
                "row norm bounds need a square matrix, got " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  double max_row = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) max_row = std::max(max_row, norm2(a.row(i)));
  return {max_row, operator_norm(a)};
}

EigenDecomposition jacobi_eigs(const Matrix& s) {
  if (!s.square()) {
    throw Error(Errc::DimensionMismatch,
                "eigensolver needs a square matrix, got " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()));
  }
  const std::size_t n = s.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(std::abs(s(i, j) - s(j, i)) < 1e-10)) {
        throw Error(Errc::NotSymmetric, "entries (" + std::to_string(i) + ", " + std::to_string(j) +
                                            ") and its transpose differ by " + std::to_string(s(i, j) - s(j, i)));
      }
    }
  }

  Matrix a = s;
  // Work on the exactly symmetric part.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (s(i, j) + s(j, i));
  }
  Matrix v = Matrix::identity(n);
  const double tol = 1e-13 * frobenius_norm(a);

  auto off_mass = [&a, n] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) sum += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(sum);
  };

  constexpr int kSweepBudget = 100;
  int sweep = 0;
  for (; sweep < kSweepBudget && off_mass() > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that annihilates a(p, q) (Golub & Van Loan 8.5.2).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  if (off_mass() > tol) {
    throw Error(Errc::NonConvergence, "Jacobi eigensolver did not converge in " + std::to_string(kSweepBudget) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&a](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

}  // namespace urn
