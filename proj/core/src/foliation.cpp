#include "resilog/foliation.hpp"

#include <random>

#include "resilog/error.hpp"
#include "resilog/parse.hpp"

namespace resilog {

namespace {

// Dense univariate polynomial, coefficient i multiplies t^i.
using UniPoly = std::vector<Rational>;

void trim(UniPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

UniPoly uni_mul(const UniPoly& a, const UniPoly& b) {
  if (a.empty() || b.empty()) return {};
  UniPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

UniPoly uni_rem(UniPoly a, const UniPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational factor = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= factor * b[i];
    trim(a);
  }
  return a;
}

UniPoly uni_gcd(UniPoly a, UniPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UniPoly r = uni_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

UniPoly uni_derivative(const UniPoly& p) {
  UniPoly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * Rational(static_cast<long>(i)));
  trim(out);
  return out;
}

// f restricted to the line t -> base + t * direction.
UniPoly restrict_to_line(const MultiPoly& f, const std::vector<Rational>& base,
                         const std::vector<Rational>& direction) {
  UniPoly out;
  for (const auto& [e, c] : f.terms()) {
    UniPoly term{c};
    for (std::size_t i = 0; i < e.size(); ++i) {
      const UniPoly linear{base[i], direction[i]};
      for (unsigned k = 0; k < e[i]; ++k) term = uni_mul(term, linear);
    }
    if (out.size() < term.size()) out.resize(term.size());
    for (std::size_t i = 0; i < term.size(); ++i) out[i] += term[i];
  }
  trim(out);
  return out;
}

// Only lines on which f keeps its full degree are informative.
bool looks_reduced(const MultiPoly& f) {
  std::mt19937_64 rng(0x5eedULL);
  constexpr int kTrials = 3;
  constexpr int kMaxAttempts = 50;
  const auto degree = static_cast<std::size_t>(f.total_degree());
  if (degree <= 1) return true;
  int informative = 0;
  int failures = 0;
  for (int attempt = 0; attempt < kMaxAttempts && informative < kTrials; ++attempt) {
    std::vector<Rational> base(f.nvars());
    std::vector<Rational> direction(f.nvars());
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      base[i] = Rational(static_cast<long>(rng() % 15) - 7);
      direction[i] = Rational(static_cast<long>(rng() % 15) - 7);
    }
    const UniPoly g = restrict_to_line(f, base, direction);
    if (g.size() != degree + 1) continue;
    ++informative;
    if (uni_gcd(g, uni_derivative(g)).size() > 1) ++failures;
  }
  return informative == 0 || failures < informative;
}

}  // namespace

std::string chart_variable_name(std::size_t homogeneous_index) {
  return "x" + std::to_string(homogeneous_index);
}

FoliationProblem make_problem(std::vector<std::string> vars, std::vector<MultiPoly> field,
                              MultiPoly divisor) {
  if (vars.size() < 2) throw InvalidProblem("projective space needs at least two coordinates");
  FoliationProblem problem;
  problem.n = vars.size() - 1;
  if (field.size() != vars.size()) {
    throw InvalidProblem("field has " + std::to_string(field.size()) + " components, expected " +
                         std::to_string(vars.size()));
  }
  std::optional<unsigned> degree;
  for (std::size_t i = 0; i < field.size(); ++i) {
    field[i] = field[i].with_variables(vars);
    if (field[i].is_zero()) continue;
    const auto e = field[i].homogeneous_degree();
    if (!e) throw InvalidProblem("field component " + std::to_string(i) + " is not homogeneous");
    if (degree && *degree != *e) {
      throw InvalidProblem("field components have different degrees (" + std::to_string(*degree) +
                           " and " + std::to_string(*e) + ")");
    }
    degree = e;
  }
  if (!degree) throw InvalidProblem("field is identically zero");

  divisor = divisor.with_variables(vars);
  const auto m = divisor.homogeneous_degree();
  if (!m) throw InvalidProblem("divisor is zero or not homogeneous");
  if (*m == 0) throw InvalidProblem("divisor must have degree at least 1");

  problem.vars = std::move(vars);
  problem.field = std::move(field);
  problem.divisor = std::move(divisor);
  problem.d = *degree;
  problem.m = *m;
  if (!looks_reduced(problem.divisor)) {
    problem.warnings.push_back("divisor may be non-reduced: restrictions to random lines have "
                               "repeated roots");
  }
  return problem;
}

ChartField dehomogenize_field(const FoliationProblem& problem, std::size_t chart) {
  if (chart > problem.n) throw InvalidProblem("chart index out of range");
  ChartField out;
  out.chart = chart;
  for (std::size_t j = 0; j <= problem.n; ++j) {
    if (j == chart) continue;
    out.vars.push_back(chart_variable_name(j));
    out.homogeneous_index.push_back(j);
  }
  // Rename homogeneous variables to affine names, with z_chart kept as a
  // placeholder that is then set to 1.
  std::vector<std::string> renamed(problem.vars.size());
  for (std::size_t j = 0; j <= problem.n; ++j) {
    renamed[j] = j == chart ? std::string("__chart") : chart_variable_name(j);
  }
  auto affine = [&](const MultiPoly& p) {
    MultiPoly q(renamed);
    for (const auto& [e, c] : p.terms()) q.add_term(e, c);
    return q.substitute(chart, Rational(1)).with_variables(out.vars);
  };
  const MultiPoly v_chart = affine(problem.field[chart]);
  for (std::size_t j = 0; j < out.vars.size(); ++j) {
    const std::size_t h = out.homogeneous_index[j];
    const MultiPoly x = MultiPoly::variable(out.vars, j);
    out.a.push_back(affine(problem.field[h]) - x * v_chart);
  }
  out.f = affine(problem.divisor);
  out.k = MultiPoly(out.vars);
  return out;
}

MultiPoly apply_field(const std::vector<MultiPoly>& a, const MultiPoly& f) {
  MultiPoly out(f.vars());
  for (std::size_t j = 0; j < a.size(); ++j) out += a[j] * f.partial(j);
  return out.with_variables(f.vars());
}

void extract_cofactor(ChartField& chart) {
  if (chart.f.is_constant()) {
    chart.f = MultiPoly::constant(chart.vars, Rational(1));
    chart.k = MultiPoly(chart.vars);
    chart.has_cofactor = true;
    return;
  }
  const MultiPoly vf = apply_field(chart.a, chart.f);
  auto division = divide(vf, chart.f);
  if (!division.remainder.is_zero()) {
    throw NotTangent(chart.chart, print_poly(division.remainder.with_variables(chart.vars)));
  }
  chart.k = division.quotient.with_variables(chart.vars);
  chart.has_cofactor = true;
}

ChartField make_local_field(std::vector<std::string> vars, std::vector<MultiPoly> a, MultiPoly f,
                            std::size_t chart) {
  if (a.size() != vars.size()) throw InvalidProblem("local field arity does not match variables");
  ChartField out;
  out.chart = chart;
  out.vars = std::move(vars);
  for (std::size_t j = 0; j < out.vars.size(); ++j) out.homogeneous_index.push_back(j);
  for (auto& component : a) out.a.push_back(component.with_variables(out.vars));
  out.f = f.is_zero() ? MultiPoly::constant(out.vars, Rational(1)) : f.with_variables(out.vars);
  extract_cofactor(out);
  return out;
}

std::vector<ChartField> verify_tangency(const FoliationProblem& problem) {
  std::vector<ChartField> charts;
  for (std::size_t c = 0; c <= problem.n; ++c) {
    ChartField chart = dehomogenize_field(problem, c);
    extract_cofactor(chart);
    charts.push_back(std::move(chart));
  }
  return charts;
}

Rational ChernExpectations::ordinary_total(std::size_t i) const {
  return c1_NF.pow(static_cast<unsigned>(n - i)) * Rational(static_cast<long>(m)).pow(
                                                        static_cast<unsigned>(i));
}

Rational ChernExpectations::log_total(std::size_t i) const {
  return c1_Nlog.pow(static_cast<unsigned>(n - i)) * Rational(static_cast<long>(m)).pow(
                                                          static_cast<unsigned>(i));
}

Rational ChernExpectations::var_total(std::size_t i) const {
  return ordinary_total(i) - log_total(i);
}

ChernExpectations chern_expectations(std::size_t n, unsigned d, unsigned m) {
  ChernExpectations out;
  out.n = n;
  out.d = d;
  out.m = m;
  out.c1_NF = Rational(static_cast<long>(n + d));
  out.c1_Nlog = Rational(static_cast<long>(n + d) - static_cast<long>(m));
  return out;
}

ChernExpectations chern_expectations(const FoliationProblem& problem) {
  return chern_expectations(problem.n, problem.d, problem.m);
}

}  // namespace resilog
