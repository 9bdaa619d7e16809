#include "resilog/birational.hpp"

#include <algorithm>

#include "resilog/error.hpp"
#include "resilog/parse.hpp"

namespace resilog {

DefinitenessCheck check_negative_definite(const RatMatrix& M) {
  if (!M.is_square()) throw NonSquare("intersection matrix must be square");
  if (!M.is_symmetric()) throw AsymmetricMatrix("intersection matrix must be symmetric");
  DefinitenessCheck out;
  out.negative_definite = true;
  for (std::size_t k = 1; k <= M.rows(); ++k) {
    const Rational minor = det_exact(M.leading(k));
    out.minors.push_back(minor);
    const int expected = k % 2 == 1 ? -1 : 1;
    if (out.negative_definite && minor.sign() != expected) {
      out.negative_definite = false;
      out.failing_k = k;
    }
  }
  if (M.rows() == 0) out.negative_definite = false;
  return out;
}

std::string to_string(Singularity s) {
  switch (s) {
    case Singularity::terminal: return "terminal";
    case Singularity::canonical: return "canonical";
    case Singularity::log_terminal: return "log_terminal";
    case Singularity::log_canonical: return "log_canonical";
    case Singularity::not_log_canonical: return "not_log_canonical";
  }
  return "unknown";
}

Singularity classify(std::span<const Rational> a) {
  auto all = [&](auto pred) { return std::all_of(a.begin(), a.end(), pred); };
  const Rational minus_one(-1);
  if (all([](const Rational& x) { return x.sign() > 0; })) return Singularity::terminal;
  if (all([](const Rational& x) { return x.sign() >= 0; })) return Singularity::canonical;
  if (all([&](const Rational& x) { return x > minus_one; })) return Singularity::log_terminal;
  if (all([&](const Rational& x) { return x >= minus_one; })) return Singularity::log_canonical;
  return Singularity::not_log_canonical;
}

std::vector<Rational> expected_exceptional_residues(const RatMatrix& M,
                                                    std::span<const unsigned> g) {
  if (!M.is_square()) throw NonSquare("intersection matrix must be square");
  const std::size_t r = M.rows();
  if (!g.empty() && g.size() != r) throw DimensionMismatch("genus vector has wrong length");
  std::vector<Rational> I(r);
  for (std::size_t j = 0; j < r; ++j) {
    const long genus = g.empty() ? 0 : static_cast<long>(g[j]);
    Rational value(2 - 2 * genus);
    for (std::size_t k = 0; k < r; ++k) {
      if (k != j) value -= M(j, k);
    }
    I[j] = value;
  }
  return I;
}

DiscrepancyResult solve_discrepancies(const DiscrepancyProblem& p) {
  DiscrepancyResult out;
  out.definiteness = check_negative_definite(p.M);
  if (!out.definiteness.negative_definite) {
    const std::string where =
        out.definiteness.failing_k ? " (leading minor " + std::to_string(*out.definiteness.failing_k) +
                                         " has the wrong sign)"
                                   : "";
    throw NotNegativeDefinite("intersection matrix is not negative definite" + where);
  }
  if (p.I.size() != p.r()) throw DimensionMismatch("residue vector has wrong length");
  std::vector<Rational> rhs;
  for (const auto& x : p.I) rhs.push_back(-x);
  out.b = solve_linear(p.M, rhs);
  for (const auto& x : out.b) out.a.push_back(x - Rational(1));
  out.classification = classify(out.a);
  for (const auto& x : p.M.apply(out.b)) out.reconstructed_I.push_back(-x);
  out.round_trip = out.reconstructed_I == p.I;
  out.adjunction_I = expected_exceptional_residues(p.M, p.g);
  out.matches_adjunction = out.adjunction_I == p.I;
  return out;
}

CyclicQuotientModel cyclic_quotient_model(unsigned m) {
  if (m < 2) throw InvalidProblem("cyclic quotient model needs m >= 2");
  CyclicQuotientModel out;
  out.m = m;
  const std::string ms = std::to_string(m);
  const std::vector<std::string> xb{"x", "b"};
  const std::vector<std::string> yc{"y", "c"};
  out.charts.push_back(make_local_field(
      xb, {parse_poly(ms + "*x", xb), parse_poly("-2*b", xb)}, parse_poly("x", xb), 0));
  out.charts.push_back(make_local_field(
      yc, {parse_poly("-" + ms + "*y", yc), parse_poly("2*c", yc)}, parse_poly("y", yc), 1));
  out.I_E = Rational(0);
  for (const auto& cf : out.charts) {
    SingularPoint p = classify_point(cf, SingularPoint::exact(cf.chart, {Rational(0), Rational(0)}));
    ResidueRecord record = simple_residues(cf, p, 1);
    out.I_E += std::get<Rational>(*record.log);
    out.points.push_back(std::move(p));
    out.residues.push_back(std::move(record));
  }
  out.M = RatMatrix{{Rational(-static_cast<long>(m))}};
  out.result = solve_discrepancies({out.M, {out.I_E}, {0}});
  return out;
}

}  // namespace resilog
