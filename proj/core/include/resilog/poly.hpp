#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "resilog/rational.hpp"

namespace resilog {

using Exponent = std::vector<unsigned>;

// Lexicographic order in declared variable order, largest first, so that
// `terms().begin()` is the leading term.
struct LexGreater {
  bool operator()(const Exponent& lhs, const Exponent& rhs) const;
};

// Sparse multivariate polynomial over Rational. The variable list is part of
// the value: two polynomials compare equal only if they agree on both.
// Binary operations between polynomials over different variable lists embed
// both into the merged list (first operand's order, then new names).
class MultiPoly {
 public:
  using TermMap = std::map<Exponent, Rational, LexGreater>;

  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> vars);

  static MultiPoly constant(std::vector<std::string> vars, const Rational& value);
  static MultiPoly variable(std::vector<std::string> vars, std::string_view name);
  static MultiPoly variable(std::vector<std::string> vars, std::size_t index);
  static MultiPoly monomial(std::vector<std::string> vars, Exponent exponent,
                            const Rational& coefficient);

  [[nodiscard]] const std::vector<std::string>& vars() const { return vars_; }
  [[nodiscard]] std::size_t nvars() const { return vars_.size(); }
  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const;
  [[nodiscard]] Rational constant_term() const;
  [[nodiscard]] Rational coefficient(const Exponent& exponent) const;
  // Total degree; -1 for the zero polynomial.
  [[nodiscard]] int total_degree() const;
  [[nodiscard]] unsigned degree_in(std::size_t var) const;
  // Degree when every term has the same total degree; nullopt otherwise or for zero.
  [[nodiscard]] std::optional<unsigned> homogeneous_degree() const;
  [[nodiscard]] bool is_homogeneous() const { return is_zero() || homogeneous_degree().has_value(); }
  [[nodiscard]] bool is_affine_linear() const { return total_degree() <= 1; }

  // Throws UnknownVariable.
  [[nodiscard]] std::size_t variable_index(std::string_view name) const;

  // Adds `coefficient * x^exponent`; zero results are dropped.
  void add_term(const Exponent& exponent, const Rational& coefficient);

  // Re-expresses the polynomial over `vars`, which must contain every
  // variable that occurs with nonzero exponent.
  [[nodiscard]] MultiPoly with_variables(const std::vector<std::string>& vars) const;

  MultiPoly& operator+=(const MultiPoly& rhs);
  MultiPoly& operator-=(const MultiPoly& rhs);
  MultiPoly& operator*=(const MultiPoly& rhs);
  MultiPoly& operator*=(const Rational& scalar);

  friend MultiPoly operator+(MultiPoly lhs, const MultiPoly& rhs) { return lhs += rhs; }
  friend MultiPoly operator-(MultiPoly lhs, const MultiPoly& rhs) { return lhs -= rhs; }
  friend MultiPoly operator*(MultiPoly lhs, const MultiPoly& rhs) { return lhs *= rhs; }
  friend MultiPoly operator*(MultiPoly lhs, const Rational& rhs) { return lhs *= rhs; }
  friend MultiPoly operator*(const Rational& lhs, MultiPoly rhs) { return rhs *= lhs; }
  friend MultiPoly operator-(const MultiPoly& p);

  friend bool operator==(const MultiPoly& lhs, const MultiPoly& rhs) = default;

  [[nodiscard]] MultiPoly pow(unsigned exponent) const;

  [[nodiscard]] MultiPoly partial(std::string_view var) const;
  [[nodiscard]] MultiPoly partial(std::size_t var) const;

  // Throws DimensionMismatch when point.size() != nvars().
  [[nodiscard]] Rational eval(std::span<const Rational> point) const;
  [[nodiscard]] std::complex<double> eval(std::span<const std::complex<double>> point) const;

  // Substitutes `value` for variable `var` and removes it from the list.
  [[nodiscard]] MultiPoly substitute(std::size_t var, const Rational& value) const;
  // Replaces variable `var` by `replacement` (a polynomial over the other
  // variables) and removes it from the list.
  [[nodiscard]] MultiPoly compose(std::size_t var, const MultiPoly& replacement) const;

 private:
  std::vector<std::string> vars_;
  TermMap terms_;
};

std::vector<std::string> merge_variables(const std::vector<std::string>& a,
                                         const std::vector<std::string>& b);

enum class PolyOp { add, sub, mul };
MultiPoly poly_arith(const MultiPoly& p, const MultiPoly& q, PolyOp op);

struct DivisionResult {
  MultiPoly quotient;
  MultiPoly remainder;
};

// Single-divisor multivariate division under lex order. Throws ZeroDivisor.
DivisionResult divide(const MultiPoly& p, const MultiPoly& f);

// Quotient q with p == q * f, or nullopt (not divisible). Throws ZeroDivisor.
std::optional<MultiPoly> exact_divide(const MultiPoly& p, const MultiPoly& f);

}  // namespace resilog
