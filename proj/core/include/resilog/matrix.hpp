#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "resilog/rational.hpp"

namespace resilog {

// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RatMatrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool is_square() const { return rows_ == cols_; }
  [[nodiscard]] bool is_symmetric() const;

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  // Leading k x k principal submatrix.
  [[nodiscard]] RatMatrix leading(std::size_t k) const;

  [[nodiscard]] std::vector<Rational> apply(std::span<const Rational> x) const;

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Bareiss fraction-free elimination after clearing denominators row by row.
// Throws NonSquare.
Rational det_exact(const RatMatrix& m);

// Exact Gaussian elimination. Throws NonSquare, DimensionMismatch, SingularMatrix.
std::vector<Rational> solve_linear(const RatMatrix& m, std::span<const Rational> rhs);

// Solution set of m x = rhs for any shape: consistency, dimension of the
// solution space, and one particular solution (free variables set to 0).
struct AffineSolution {
  bool consistent = false;
  std::size_t nullity = 0;
  std::vector<Rational> particular;
};

AffineSolution solve_affine(const RatMatrix& m, std::span<const Rational> rhs);

}  // namespace resilog
