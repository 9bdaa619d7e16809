#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "resilog/foliation.hpp"
#include "resilog/numeric.hpp"
#include "resilog/rational.hpp"

namespace resilog {

enum class Exactness { exact, approximate };

// A zero of a chart field. Exact points carry rational coordinates; every
// point carries complex coordinates for the floating-point engine.
struct SingularPoint {
  std::size_t chart = 0;
  std::vector<Rational> exact_coords;
  CVector coords;
  Exactness exactness = Exactness::exact;
  double error_bound = 0.0;

  // Filled by classify_point.
  bool on_divisor = false;
  bool divisor_singular = false;
  std::optional<std::size_t> adapted_index;
  bool simple = false;             // ambient Jacobian invertible
  bool simple_on_divisor = false;  // induced Jacobian on D invertible

  [[nodiscard]] bool is_exact() const { return exactness == Exactness::exact; }

  static SingularPoint exact(std::size_t chart, std::vector<Rational> coords);
  static SingularPoint approximate(std::size_t chart, CVector coords, double error_bound);
};

// Tolerance used to decide vanishing at approximate points.
inline constexpr double kApproxZeroTol = 1e-8;

// Checks that p is a zero and fills the divisor and simplicity flags.
// Throws NotAZero, DimensionMismatch.
SingularPoint classify_point(const ChartField& cf, SingularPoint p);

// Floating value with an error estimate.
struct Approx {
  Complex value;
  double error = 0.0;
};

using Value = std::variant<Rational, Approx>;

[[nodiscard]] bool is_exact(const Value& v);
[[nodiscard]] Complex to_complex(const Value& v);
[[nodiscard]] double error_of(const Value& v);
Value operator+(const Value& a, const Value& b);
Value operator-(const Value& a, const Value& b);
// "p/q" for exact values, "<re>±<err>" (or "(<re>+<im>i)±<err>") otherwise.
std::string render(const Value& v);

enum class Method { closed_form, perturbation };
std::string to_string(Method m);

// Ordinary, logarithmic and variational residue of one point for one i.
// A missing value is one the closed form cannot provide at this point.
struct ResidueRecord {
  SingularPoint point;
  std::size_t i = 0;
  std::optional<Value> ordinary;
  std::optional<Value> log;
  std::optional<Value> var;
  Method method = Method::closed_form;
  std::vector<std::string> notes;
};

template <class Scalar>
struct BasicLocalData {
  Scalar trJ{};
  Scalar detJ{};
  Scalar k_at_p{};
  // Present only for points on the divisor.
  std::optional<Scalar> trJD;
  std::optional<Scalar> detJD;
  std::optional<std::size_t> s;
};

using LocalData = BasicLocalData<Rational>;
using ApproxLocalData = BasicLocalData<Complex>;

// Jacobian data at an exact zero. `s` overrides the adapted index; it must
// satisfy df/dx_s(p) != 0. Throws NotAZero, DivisorSingularAt.
LocalData local_data(const ChartField& cf, const SingularPoint& p,
                     std::optional<std::size_t> s = std::nullopt);
ApproxLocalData local_data_approx(const ChartField& cf, const SingularPoint& p,
                                  std::optional<std::size_t> s = std::nullopt);

namespace detail {

template <class Scalar>
Scalar ipow(const Scalar& base, std::size_t exponent) {
  Scalar out(1);
  for (std::size_t i = 0; i < exponent; ++i) out *= base;
  return out;
}

}  // namespace detail

// Numerator of the variational residue, with the division by k carried out
// on the binomial expansion so that k = 0 is regular:
//   i >= 1: k^(i-1) * ((T + k)^(n-i) - T^(n-i))
//   i == 0: ((T + k)^n - T^n) / k
template <class Scalar>
Scalar delta_numerator(const Scalar& T, const Scalar& k, std::size_t n, std::size_t i) {
  Scalar sum(0);
  if (i == 0) {
    for (std::size_t l = 1; l <= n; ++l) {
      sum += Scalar(binomial(static_cast<unsigned>(n), static_cast<unsigned>(l)).to_double()) *
             detail::ipow(T, n - l) * detail::ipow(k, l - 1);
    }
    return sum;
  }
  for (std::size_t l = 1; l <= n - i; ++l) {
    sum += Scalar(binomial(static_cast<unsigned>(n - i), static_cast<unsigned>(l)).to_double()) *
           detail::ipow(T, n - i - l) * detail::ipow(k, l);
  }
  return detail::ipow(k, i - 1) * sum;
}

template <>
Rational delta_numerator<Rational>(const Rational& T, const Rational& k, std::size_t n,
                                   std::size_t i);

// Closed-form residues at a simple zero. Throws DegenerateZero,
// DivisorSingularAt, NotOnDivisor, std::out_of_range (i >= n).
ResidueRecord simple_residues(const ChartField& cf, const SingularPoint& p, std::size_t i,
                              std::optional<std::size_t> s = std::nullopt);

// Residues by perturbing the field, summing closed forms over the perturbed
// zeros near p, and Richardson-extrapolating over the two eps levels.
// Throws ZeroCountUnstable, NewtonDivergence, BoundaryZero, NotSupported.
ResidueRecord perturbed_residue(const ChartField& cf, const SingularPoint& p, std::size_t i,
                                const NumericConfig& cfg);

// simple_residues, falling back to perturbed_residue at degenerate zeros.
ResidueRecord compute_residue(const ChartField& cf, const SingularPoint& p, std::size_t i,
                              const NumericConfig& cfg);

struct ZeroSearch {
  enum class Kind { exact_linear, numeric };
  Kind kind = Kind::exact_linear;
  // Numeric search box: real parts in [lo, hi], imaginary parts in [-imag, imag].
  double lo = -2.0;
  double hi = 2.0;
  double imag = 0.0;
  int grid = 9;
  NumericConfig cfg;
};

struct DiscoveryResult {
  std::vector<SingularPoint> points;
  bool exhaustive = false;
};

// Zeros of the chart field, classified. Numeric roots that snap to rationals
// and vanish exactly are promoted to exact points. Throws NonLinearField,
// PositiveDimensional (exact_linear mode only).
DiscoveryResult discover_zeros(const ChartField& cf, const ZeroSearch& search);

}  // namespace resilog
