#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "resilog/foliation.hpp"
#include "resilog/matrix.hpp"
#include "resilog/residue.hpp"
#include "resilog/parse.hpp"
#include "resilog/poly.hpp"
#include "resilog/problem_io.hpp"
#include "resilog/rational.hpp"

namespace resilog::testkit {

inline Rational Q(const char* text) { return Rational::parse(text); }

inline std::string fixture_path(const std::string& name) {
  return std::string(RESILOG_FIXTURE_DIR) + "/" + name;
}

inline ProblemFile load_fixture(const std::string& name) {
  return parse_problem(read_file(fixture_path(name)));
}

inline MultiPoly P(const std::string& text, const std::vector<std::string>& vars) {
  return parse_poly(text, vars);
}

inline std::vector<std::string> homogeneous_vars(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i <= n; ++i) out.push_back("z" + std::to_string(i));
  return out;
}

// Random polynomial with small integer or rational coefficients.
inline MultiPoly random_poly(std::mt19937_64& rng, const std::vector<std::string>& vars,
                             unsigned max_degree, int max_terms, bool rational_coeffs = false) {
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<int> den(1, 6);
  std::uniform_int_distribution<int> terms(0, max_terms);
  std::uniform_int_distribution<unsigned> exp(0, max_degree);
  MultiPoly p(vars);
  const int count = terms(rng);
  for (int t = 0; t < count; ++t) {
    Exponent e(vars.size(), 0);
    unsigned remaining = max_degree;
    for (auto& x : e) {
      x = std::min(remaining, exp(rng));
      remaining -= x;
    }
    const Rational c = rational_coeffs ? Rational(coeff(rng), den(rng)) : Rational(coeff(rng));
    p.add_term(e, c);
  }
  return p;
}

// Diagonal linear field diag(lambda) on P^n with divisor z_n.
inline FoliationProblem diagonal_problem(const std::vector<long>& lambda) {
  const auto vars = homogeneous_vars(lambda.size() - 1);
  std::vector<MultiPoly> field;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    field.push_back(Rational(lambda[i]) * MultiPoly::variable(vars, i));
  }
  return make_problem(vars, field, MultiPoly::variable(vars, lambda.size() - 1));
}

// Integer matrix with determinant 1, from random row operations.
inline RatMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int ops = 6) {
  RatMatrix P = RatMatrix::identity(n);
  if (n < 2) return P;
  std::uniform_int_distribution<int> mult(-2, 2);
  for (int t = 0; t < ops; ++t) {
    const std::size_t r = rng() % n;
    std::size_t s = rng() % n;
    if (s == r) s = (s + 1) % n;
    const Rational c(mult(rng));
    for (std::size_t j = 0; j < n; ++j) P(r, j) += c * P(s, j);
  }
  return P;
}

inline RatMatrix inverse(const RatMatrix& P) {
  const std::size_t n = P.rows();
  RatMatrix out(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<Rational> e(n, Rational(0));
    e[c] = Rational(1);
    const auto col = solve_linear(P, e);
    for (std::size_t r = 0; r < n; ++r) out(r, c) = col[r];
  }
  return out;
}

// The linear field A z with A = P diag(lambda) P^-1 on P^n. Its zeros are the
// columns of P; the divisor is row `r` of P^-1, invariant with cofactor
// lambda_r - lambda_chart in each chart.
struct LinearInstance {
  FoliationProblem problem;
  RatMatrix P;
  RatMatrix Pinv;
  std::vector<long> lambda;
  std::size_t divisor_row = 0;
  std::vector<SingularPoint> zeros;  // one per column, lowest chart
};

inline LinearInstance conjugated_linear(const RatMatrix& P, const std::vector<long>& lambda,
                                        std::size_t divisor_row) {
  const std::size_t N = lambda.size();
  const auto vars = homogeneous_vars(N - 1);
  LinearInstance out;
  out.P = P;
  out.Pinv = inverse(P);
  out.lambda = lambda;
  out.divisor_row = divisor_row;
  std::vector<MultiPoly> field;
  for (std::size_t i = 0; i < N; ++i) {
    MultiPoly c(vars);
    for (std::size_t j = 0; j < N; ++j) {
      Rational a(0);
      for (std::size_t l = 0; l < N; ++l) a += P(i, l) * Rational(lambda[l]) * out.Pinv(l, j);
      c += a * MultiPoly::variable(vars, j);
    }
    field.push_back(c);
  }
  MultiPoly f(vars);
  for (std::size_t j = 0; j < N; ++j) f += out.Pinv(divisor_row, j) * MultiPoly::variable(vars, j);
  out.problem = make_problem(vars, field, f);
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t chart = 0;
    while (P(chart, col).is_zero()) ++chart;
    std::vector<Rational> coords;
    for (std::size_t j = 0; j < N; ++j) {
      if (j != chart) coords.push_back(P(j, col) / P(chart, col));
    }
    out.zeros.push_back(SingularPoint::exact(chart, coords));
  }
  return out;
}

// Distinct integer eigenvalues in [-range, range].
inline std::vector<long> distinct_lambdas(std::mt19937_64& rng, std::size_t count, long range = 6) {
  std::vector<long> out;
  std::uniform_int_distribution<long> dist(-range, range);
  while (out.size() < count) {
    const long x = dist(rng);
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  return out;
}

}  // namespace resilog::testkit
