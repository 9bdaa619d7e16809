#include "resilog/matrix.hpp"

#include <utility>

#include "resilog/error.hpp"

namespace resilog {

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMatrix::RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionMismatch("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
  return m;
}

bool RatMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i + 1; j < cols_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

RatMatrix RatMatrix::leading(std::size_t k) const {
  RatMatrix out(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) out(i, j) = (*this)(i, j);
  }
  return out;
}

std::vector<Rational> RatMatrix::apply(std::span<const Rational> x) const {
  if (x.size() != cols_) throw DimensionMismatch("matrix-vector size mismatch");
  std::vector<Rational> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * x[j];
  }
  return out;
}

Rational det_exact(const RatMatrix& m) {
  if (!m.is_square()) throw NonSquare("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Rational(1);

  // Scale each row to integers; det(m) = det(scaled) / prod(scales).
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
  mpz_class scale_product = 1;
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class lcm = 1;
    for (std::size_t j = 0; j < n; ++j) {
      const mpz_class den = m(i, j).denominator();
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
    }
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = m(i, j).numerator() * (lcm / m(i, j).denominator());
    }
    scale_product *= lcm;
  }

  int sign = 1;
  mpz_class previous = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && a[pivot][k] == 0) ++pivot;
      if (pivot == n) return Rational(0);
      std::swap(a[k], a[pivot]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), previous.get_mpz_t());
      }
      a[i][k] = 0;
    }
    previous = a[k][k];
  }
  mpz_class det = a[n - 1][n - 1];
  if (sign < 0) det = -det;
  return Rational(mpq_class(det, scale_product));
}

std::vector<Rational> solve_linear(const RatMatrix& m, std::span<const Rational> rhs) {
  if (!m.is_square()) throw NonSquare("linear solve with a non-square matrix");
  const std::size_t n = m.rows();
  if (rhs.size() != n) throw DimensionMismatch("right-hand side has wrong length");

  RatMatrix a = m;
  std::vector<Rational> b(rhs.begin(), rhs.end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && a(pivot, k).is_zero()) ++pivot;
    if (pivot == n) throw SingularMatrix("matrix is singular");
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      std::swap(b[k], b[pivot]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      const Rational factor = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
      b[i] -= factor * b[k];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t k = n; k-- > 0;) {
    Rational s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

AffineSolution solve_affine(const RatMatrix& m, std::span<const Rational> rhs) {
  if (rhs.size() != m.rows()) throw DimensionMismatch("right-hand side has wrong length");
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  RatMatrix a = m;
  std::vector<Rational> b(rhs.begin(), rhs.end());
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && a(pivot, c).is_zero()) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(pivot, j));
      std::swap(b[r], b[pivot]);
    }
    const Rational inv = Rational(1) / a(r, c);
    for (std::size_t j = 0; j < cols; ++j) a(r, j) *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      const Rational factor = a(i, c);
      for (std::size_t j = 0; j < cols; ++j) a(i, j) -= factor * a(r, j);
      b[i] -= factor * b[r];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  AffineSolution out;
  out.consistent = true;
  for (std::size_t i = r; i < rows; ++i) {
    if (!b[i].is_zero()) out.consistent = false;
  }
  out.nullity = cols - r;
  if (out.consistent) {
    out.particular.assign(cols, Rational(0));
    for (std::size_t i = 0; i < r; ++i) out.particular[pivot_cols[i]] = b[i];
  }
  return out;
}

}  // namespace resilog
