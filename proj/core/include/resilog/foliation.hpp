#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "resilog/poly.hpp"
#include "resilog/rational.hpp"

namespace resilog {

// A one-dimensional foliation on P^n given by a homogeneous vector field
// V = sum V_i d/dz_i together with a reduced invariant hypersurface {f = 0}.
struct FoliationProblem {
  std::size_t n = 0;
  std::vector<std::string> vars;  // z_0 .. z_n
  std::vector<MultiPoly> field;   // n + 1 components
  MultiPoly divisor;              // homogeneous of degree m
  unsigned d = 0;                 // foliation degree (common component degree)
  unsigned m = 0;                 // divisor degree
  std::vector<std::string> warnings;
};

// Validates homogeneity and degrees, and runs the squarefreeness heuristic on
// the divisor. Throws InvalidProblem.
FoliationProblem make_problem(std::vector<std::string> vars, std::vector<MultiPoly> field,
                              MultiPoly divisor);

// The field and divisor in one affine chart, or a standalone local model.
// `a[j]` is the component along `vars[j]`; `k` satisfies v(f) = k f once the
// cofactor has been extracted.
struct ChartField {
  std::size_t chart = 0;
  std::vector<std::string> vars;
  std::vector<std::size_t> homogeneous_index;  // vars[j] = z_{homogeneous_index[j]} / z_chart
  std::vector<MultiPoly> a;
  MultiPoly f;
  MultiPoly k;
  bool has_cofactor = false;

  [[nodiscard]] std::size_t dim() const { return vars.size(); }
  // False when the divisor does not meet this chart (f is a unit).
  [[nodiscard]] bool has_divisor() const { return !f.is_constant(); }
};

// Affine chart {z_chart != 0}: a_j = V_{s(j)} - x_j V_chart evaluated at z_chart = 1.
// The cofactor is left unset.
ChartField dehomogenize_field(const FoliationProblem& problem, std::size_t chart);

// v(f) = sum_j a_j df/dx_j.
MultiPoly apply_field(const std::vector<MultiPoly>& a, const MultiPoly& f);

// Computes k = v(f)/f in place. A constant divisor is normalized to f = 1,
// k = 0. Throws NotTangent when v(f) leaves a remainder.
void extract_cofactor(ChartField& chart);

// Builds a local model directly from affine data and extracts its cofactor.
// An empty `f` (zero polynomial) means "no divisor" and is stored as 1.
ChartField make_local_field(std::vector<std::string> vars, std::vector<MultiPoly> a,
                            MultiPoly f, std::size_t chart = 0);

// Every chart with its cofactor. Throws NotTangent on the first failing chart.
std::vector<ChartField> verify_tangency(const FoliationProblem& problem);

// Global Chern numbers of N_F and N^log on P^n.
struct ChernExpectations {
  std::size_t n = 0;
  unsigned d = 0;
  unsigned m = 0;
  Rational c1_NF;    // n + d
  Rational c1_Nlog;  // n + d - m

  [[nodiscard]] Rational ordinary_total(std::size_t i) const;
  [[nodiscard]] Rational log_total(std::size_t i) const;
  [[nodiscard]] Rational var_total(std::size_t i) const;
};

ChernExpectations chern_expectations(const FoliationProblem& problem);
ChernExpectations chern_expectations(std::size_t n, unsigned d, unsigned m);

// Affine variable name used for z_j in every chart.
std::string chart_variable_name(std::size_t homogeneous_index);

}  // namespace resilog
