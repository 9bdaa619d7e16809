#include <gtest/gtest.h>

#include <random>

#include "resilog/error.hpp"
#include "resilog/residue.hpp"
#include "support.hpp"

using namespace resilog;
using resilog::testkit::P;
using resilog::testkit::Q;

namespace {

Rational exact(const std::optional<Value>& v) {
  if (!v) throw std::logic_error("missing value");
  return std::get<Rational>(*v);
}

Rational power(const Rational& x, std::size_t e) {
  Rational out(1);
  for (std::size_t i = 0; i < e; ++i) out *= x;
  return out;
}

SingularPoint origin(std::size_t chart, std::size_t n) {
  return SingularPoint::exact(chart, std::vector<Rational>(n, Rational(0)));
}

std::vector<ChartField> charts_of(const std::string& fixture) {
  return verify_tangency(testkit::load_fixture(fixture).problem);
}

TEST(LocalData, P2ChartZero) {
  const auto charts = charts_of("p2_example.toml");
  const LocalData ld = local_data(charts[0], origin(0, 2));
  EXPECT_EQ(ld.trJ, Rational(9));
  EXPECT_EQ(ld.detJ, Rational(20));
  EXPECT_EQ(ld.k_at_p, Rational(4));
  EXPECT_EQ(*ld.trJD, Rational(5));
  EXPECT_EQ(*ld.detJD, Rational(5));
  EXPECT_EQ(*ld.s, 1U);
}

TEST(LocalData, P3ChartOne) {
  const auto charts = charts_of("p3_example.toml");
  const LocalData ld = local_data(charts[1], origin(1, 3));
  EXPECT_EQ(ld.trJ, Rational(-12));
  EXPECT_EQ(ld.k_at_p, Rational(-4));
  EXPECT_EQ(*ld.trJD, Rational(-8));
  EXPECT_EQ(*ld.detJD, Rational(7));
  EXPECT_EQ(ld.detJ, Rational(-28));
}

TEST(LocalData, SignConventionOnSlantedDivisor) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField cf = make_local_field(v, {P("x", v), P("y", v)}, P("x + y", v));
  const LocalData ld = local_data(cf, origin(0, 2));
  EXPECT_EQ(*ld.s, 0U);
  EXPECT_EQ(ld.detJ, Rational(1));
  EXPECT_EQ(ld.k_at_p, Rational(1));
  EXPECT_EQ(*ld.detJD, Rational(1));
  EXPECT_EQ(*local_data(cf, origin(0, 2), 1).detJD, Rational(1));
}

TEST(LocalData, OffDivisorHasNoInducedData) {
  const auto charts = charts_of("p2_example.toml");
  const LocalData ld = local_data(charts[2], origin(2, 2));
  EXPECT_FALSE(ld.detJD.has_value());
  EXPECT_EQ(ld.detJ, Rational(-4));
  EXPECT_EQ(ld.trJ, Rational(-3));
}

TEST(LocalData, Errors) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField cf = make_local_field(v, {P("x", v), P("y", v)}, P("x*y", v));
  EXPECT_THROW((void)local_data(cf, origin(0, 2)), DivisorSingularAt);
  EXPECT_THROW((void)local_data(cf, SingularPoint::exact(0, {Rational(1), Rational(0)})), NotAZero);
  EXPECT_THROW((void)local_data(cf, SingularPoint::exact(0, {Rational(0)})), DimensionMismatch);
  const ChartField line = make_local_field(v, {P("x", v), P("y", v)}, P("x + y", v));
  EXPECT_THROW((void)local_data(line, origin(0, 2), 5), std::invalid_argument);
}

TEST(Delta, Examples) {
  EXPECT_EQ(delta_numerator(Rational(13), Rational(3), 3, 1), Rational(87));
  EXPECT_EQ(delta_numerator(Rational(5), Rational(4), 2, 0), Rational(14));
  for (std::size_t n = 1; n <= 6; ++n) {
    const Rational T = Q("7/3");
    EXPECT_EQ(delta_numerator(T, Rational(0), n, 0), Rational(static_cast<long>(n)) * power(T, n - 1));
  }
}

TEST(Delta, BinomialIdentityOnRandomRationals) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> num(-30, 30);
  std::uniform_int_distribution<long> den(1, 9);
  for (int t = 0; t < 200; ++t) {
    const Rational T(num(rng), den(rng));
    Rational k(num(rng), den(rng));
    if (k.is_zero()) k = Rational(1, 2);
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 6);
    EXPECT_EQ(k * delta_numerator(T, k, n, 0), power(T + k, n) - power(T, n));
    for (std::size_t i = 1; i < n; ++i) {
      EXPECT_EQ(delta_numerator(T, k, n, i), power(k, i - 1) * (power(T + k, n - i) - power(T, n - i)));
    }
    const Complex tc(T.to_double(), 0.0);
    const Complex kc(k.to_double(), 0.0);
    EXPECT_NEAR(delta_numerator(tc, kc, n, 0).real(), delta_numerator(T, k, n, 0).to_double(),
                1e-9 * std::max(1.0, std::abs(delta_numerator(T, k, n, 0).to_double())));
  }
}

TEST(SimpleResidues, P2Examples) {
  const auto charts = charts_of("p2_example.toml");
  const ResidueRecord r0 = simple_residues(charts[0], origin(0, 2), 0);
  EXPECT_EQ(exact(r0.ordinary), Q("81/20"));
  EXPECT_EQ(exact(r0.log), Q("25/20"));
  EXPECT_EQ(exact(r0.var), Q("56/20"));
  EXPECT_EQ(r0.method, Method::closed_form);
  const ResidueRecord r1 = simple_residues(charts[1], origin(1, 2), 1);
  EXPECT_EQ(exact(r1.ordinary), Q("6/5"));
  EXPECT_EQ(exact(r1.log), Rational(1));
  EXPECT_EQ(exact(r1.var), Q("1/5"));
  const ResidueRecord off = simple_residues(charts[2], origin(2, 2), 0);
  EXPECT_EQ(exact(off.ordinary), Q("-9/4"));
  EXPECT_EQ(exact(off.log), Q("-9/4"));
  EXPECT_EQ(exact(off.var), Rational(0));
  EXPECT_FALSE(off.point.on_divisor);
}

TEST(SimpleResidues, P3Examples) {
  const auto charts = charts_of("p3_example.toml");
  EXPECT_EQ(exact(simple_residues(charts[2], origin(2, 3), 2).var), Q("-9/6"));
  EXPECT_EQ(exact(simple_residues(charts[0], origin(0, 3), 0).var), Q("1899/126"));
  EXPECT_EQ(exact(simple_residues(charts[0], origin(0, 3), 1).var), Q("29/14"));
}

TEST(SimpleResidues, Errors) {
  const auto charts = charts_of("p2_example.toml");
  EXPECT_THROW((void)simple_residues(charts[2], origin(2, 2), 1), NotOnDivisor);
  EXPECT_THROW((void)simple_residues(charts[0], origin(0, 2), 2), std::out_of_range);
  const std::vector<std::string> v{"x", "y"};
  const ChartField degenerate = make_local_field(v, {P("x^2", v), P("-y", v)}, MultiPoly(v));
  EXPECT_THROW((void)simple_residues(degenerate, origin(0, 2), 0), DegenerateZero);
  const ChartField on_d = make_local_field(v, {P("x^2", v), P("-y", v)}, P("y", v));
  EXPECT_THROW((void)simple_residues(on_d, origin(0, 2), 1), DegenerateZero);
  const ChartField crossing = make_local_field(v, {P("x", v), P("y", v)}, P("x*y", v));
  EXPECT_THROW((void)simple_residues(crossing, origin(0, 2), 0), DivisorSingularAt);
}

// k(p) = 0: ambient Jacobian singular, induced one invertible.
TEST(SimpleResidues, VanishingCofactorKeepsOnlyVar) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField cf = make_local_field(v, {P("x", v), P("x*y + y^2", v)}, P("y", v));
  const ResidueRecord r0 = simple_residues(cf, origin(0, 2), 0);
  EXPECT_FALSE(r0.ordinary.has_value());
  EXPECT_FALSE(r0.log.has_value());
  EXPECT_EQ(exact(r0.var), Rational(2));
  EXPECT_FALSE(r0.notes.empty());
  const ResidueRecord r1 = simple_residues(cf, origin(0, 2), 1);
  EXPECT_EQ(exact(r1.ordinary), Rational(1));
  EXPECT_EQ(exact(r1.log), Rational(1));
  EXPECT_EQ(exact(r1.var), Rational(0));
}

struct LocalModel {
  ChartField cf;
  std::vector<long> mu;
  std::size_t r = 0;
};

// a = A x with eigenvalues mu, f = row r of P^-1 applied to x.
LocalModel random_local_model(std::mt19937_64& rng, std::size_t n) {
  const auto P = testkit::random_unimodular(rng, n);
  const auto Pinv = testkit::inverse(P);
  std::vector<long> mu;
  std::uniform_int_distribution<long> dist(-7, 7);
  while (mu.size() < n) {
    const long x = dist(rng);
    if (x != 0) mu.push_back(x);
  }
  const std::size_t r = rng() % n;
  std::vector<std::string> vars;
  for (std::size_t j = 0; j < n; ++j) vars.push_back("u" + std::to_string(j));
  std::vector<MultiPoly> a;
  for (std::size_t i = 0; i < n; ++i) {
    MultiPoly c(vars);
    for (std::size_t j = 0; j < n; ++j) {
      Rational e(0);
      for (std::size_t l = 0; l < n; ++l) e += P(i, l) * Rational(mu[l]) * Pinv(l, j);
      c += e * MultiPoly::variable(vars, j);
    }
    a.push_back(c);
  }
  MultiPoly f(vars);
  for (std::size_t j = 0; j < n; ++j) f += Pinv(r, j) * MultiPoly::variable(vars, j);
  return {make_local_field(vars, a, f), mu, r};
}

// Eigenvalue oracle: trJ = sum mu, detJ = prod mu, k = mu_r, detJD = prod_{j != r} mu_j.
TEST(SimpleResidues, MatchEigenvalueOracleAndLocalIdentities) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 80; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 3);
    const LocalModel model = random_local_model(rng, n);
    Rational tr(0);
    Rational det(1);
    for (long x : model.mu) {
      tr += Rational(x);
      det *= Rational(x);
    }
    const Rational k(model.mu[model.r]);
    const Rational T = tr - k;
    const Rational detJD = det / k;
    const auto p = origin(0, n);
    const LocalData ld = local_data(model.cf, p);
    ASSERT_EQ(ld.trJ, tr);
    ASSERT_EQ(ld.detJ, det);
    ASSERT_EQ(ld.k_at_p, k);
    ASSERT_EQ(*ld.detJD, detJD);
    EXPECT_EQ(ld.detJ, ld.k_at_p * *ld.detJD);
    for (std::size_t i = 0; i < n; ++i) {
      const ResidueRecord rec = simple_residues(model.cf, p, i);
      EXPECT_EQ(exact(rec.ordinary) - exact(rec.log), exact(rec.var));
      if (i == 0) {
        EXPECT_EQ(exact(rec.ordinary), power(tr, n) / det);
        EXPECT_EQ(exact(rec.log), power(T, n) / det);
      } else {
        EXPECT_EQ(exact(rec.ordinary), power(tr, n - i) * power(k, i - 1) / detJD);
        EXPECT_EQ(exact(rec.log), power(T, n - i) * power(k, i - 1) / detJD);
      }
      // Every admissible adapted index gives the same record.
      for (std::size_t s = 0; s < n; ++s) {
        if (model.cf.f.partial(s).is_zero()) continue;
        const ResidueRecord alt = simple_residues(model.cf, p, i, s);
        EXPECT_EQ(exact(alt.ordinary), exact(rec.ordinary));
        EXPECT_EQ(exact(alt.log), exact(rec.log));
        EXPECT_EQ(exact(alt.var), exact(rec.var));
      }
    }
  }
}

TEST(SimpleResidues, AdaptedIndexIndependenceOnLine) {
  const std::vector<std::string> v{"x", "y", "z"};
  const ChartField cf = make_local_field(v, {P("2*x", v), P("2*y", v), P("-3*z", v)}, P("x - y", v));
  const auto p = origin(0, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto a = simple_residues(cf, p, i, 0);
    const auto b = simple_residues(cf, p, i, 1);
    EXPECT_EQ(exact(a.var), exact(b.var));
    EXPECT_EQ(exact(a.log), exact(b.log));
    EXPECT_EQ(exact(a.ordinary), exact(b.ordinary));
  }
}

// A generic zero of a conjugated field is visible in every chart where its
// homogeneous coordinate is nonzero.
TEST(SimpleResidues, ChartIndependence) {
  std::mt19937_64 rng(8);
  int comparisons = 0;
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 2);
    const auto inst = testkit::conjugated_linear(testkit::random_unimodular(rng, n + 1, 8),
                                                 testkit::distinct_lambdas(rng, n + 1),
                                                 rng() % (n + 1));
    const auto charts = verify_tangency(inst.problem);
    for (std::size_t col = 0; col <= n; ++col) {
      std::vector<ResidueRecord> seen;
      for (std::size_t c = 0; c <= n; ++c) {
        if (inst.P(c, col).is_zero()) continue;
        std::vector<Rational> coords;
        for (std::size_t j = 0; j <= n; ++j) {
          if (j != c) coords.push_back(inst.P(j, col) / inst.P(c, col));
        }
        const auto p = classify_point(charts[c], SingularPoint::exact(c, coords));
        const std::size_t top = p.on_divisor ? n : 1;
        for (std::size_t i = 0; i < top; ++i) {
          const auto rec = simple_residues(charts[c], p, i);
          if (seen.size() < top) {
            seen.push_back(rec);
            continue;
          }
          EXPECT_EQ(exact(rec.var), exact(seen[i].var));
          EXPECT_EQ(exact(rec.log), exact(seen[i].log));
          EXPECT_EQ(exact(rec.ordinary), exact(seen[i].ordinary));
          ++comparisons;
        }
      }
    }
  }
  EXPECT_GT(comparisons, 50);
}

// Symbolic oracle: the residue of (2x - 1)^2 dx dy / (x^2 (-y)) at the origin is 4.
TEST(Perturbation, DegenerateZeroWithoutDivisor) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField cf = make_local_field(v, {P("x^2", v), P("-y", v)}, MultiPoly(v));
  const ResidueRecord rec = perturbed_residue(cf, origin(0, 2), 0, NumericConfig{});
  EXPECT_EQ(rec.method, Method::perturbation);
  EXPECT_NEAR(to_complex(*rec.ordinary).real(), 4.0, 1e-4);
  EXPECT_NEAR(to_complex(*rec.ordinary).imag(), 0.0, 1e-4);
  const ResidueRecord via_fallback = compute_residue(cf, origin(0, 2), 0, NumericConfig{});
  EXPECT_EQ(via_fallback.method, Method::perturbation);
  EXPECT_FALSE(via_fallback.notes.empty());
}

TEST(Perturbation, IdentityLinearization) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField cf = make_local_field(v, {P("x", v), P("y", v)}, MultiPoly(v));
  const ResidueRecord rec = perturbed_residue(cf, origin(0, 2), 0, NumericConfig{});
  EXPECT_NEAR(to_complex(*rec.ordinary).real(), 4.0, 1e-6 * 4.0);
}

void expect_close(const std::optional<Value>& approx, const std::optional<Value>& exact_value) {
  ASSERT_TRUE(approx && exact_value);
  const double want = std::get<Rational>(*exact_value).to_double();
  const Complex got = to_complex(*approx);
  EXPECT_NEAR(got.real(), want, 1e-6 * std::max(1.0, std::abs(want)));
  EXPECT_NEAR(got.imag(), 0.0, 1e-6 * std::max(1.0, std::abs(want)));
}

TEST(Perturbation, MatchesClosedFormAtSimpleZeros) {
  for (const char* fixture : {"p2_example.toml", "p3_example.toml"}) {
    const auto file = testkit::load_fixture(fixture);
    const auto charts = verify_tangency(file.problem);
    const std::size_t n = file.problem.n;
    for (std::size_t c = 0; c <= n; ++c) {
      const auto p = classify_point(charts[c], origin(c, n));
      for (std::size_t i = 0; i < (p.on_divisor ? n : 1); ++i) {
        const auto closed = simple_residues(charts[c], p, i);
        const auto numeric = perturbed_residue(charts[c], p, i, file.numeric);
        expect_close(numeric.ordinary, closed.ordinary);
        expect_close(numeric.log, closed.log);
        if (p.on_divisor) expect_close(numeric.var, closed.var);
      }
    }
  }
}

TEST(Perturbation, DeterministicForFixedSeed) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField cf = make_local_field(v, {P("x^2", v), P("-y", v)}, MultiPoly(v));
  NumericConfig cfg;
  const auto a = perturbed_residue(cf, origin(0, 2), 0, cfg);
  const auto b = perturbed_residue(cf, origin(0, 2), 0, cfg);
  EXPECT_EQ(to_complex(*a.ordinary), to_complex(*b.ordinary));
  EXPECT_EQ(error_of(*a.ordinary), error_of(*b.ordinary));
}

TEST(Perturbation, DegenerateOnCurvedDivisorIsUnsupported) {
  const std::vector<std::string> v{"x", "y"};
  // v(f) = f for f = y - x^2; the induced field x^2 on D is degenerate at 0.
  const ChartField bad = make_local_field(v, {P("x^2", v), P("2*x^3 + y - x^2", v)}, P("y - x^2", v));
  EXPECT_THROW((void)simple_residues(bad, origin(0, 2), 1), DegenerateZero);
  EXPECT_THROW((void)perturbed_residue(bad, origin(0, 2), 1, NumericConfig{}), NotSupported);
}

TEST(Perturbation, ConfigValidation) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField cf = make_local_field(v, {P("x", v), P("y", v)}, MultiPoly(v));
  NumericConfig cfg;
  cfg.eps_levels = {1e-3};
  EXPECT_THROW((void)perturbed_residue(cf, origin(0, 2), 0, cfg), std::invalid_argument);
  cfg = NumericConfig{};
  cfg.search_radius = -1;
  EXPECT_THROW((void)perturbed_residue(cf, origin(0, 2), 0, cfg), std::invalid_argument);
}

TEST(DiscoverZeros, ExactLinear) {
  const auto charts = charts_of("p2_example.toml");
  const auto found = discover_zeros(charts[0], ZeroSearch{});
  ASSERT_EQ(found.points.size(), 1U);
  EXPECT_TRUE(found.exhaustive);
  const auto& p = found.points[0];
  EXPECT_EQ(p.exact_coords, (std::vector<Rational>{Rational(0), Rational(0)}));
  EXPECT_TRUE(p.on_divisor);
  EXPECT_TRUE(p.simple);
  EXPECT_TRUE(p.simple_on_divisor);
  EXPECT_EQ(*p.adapted_index, 1U);
}

TEST(DiscoverZeros, AffineShiftAndInconsistentSystems) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField shifted = make_local_field(v, {P("x - 1/2", v), P("2*y + 3", v)}, MultiPoly(v));
  const auto found = discover_zeros(shifted, ZeroSearch{});
  ASSERT_EQ(found.points.size(), 1U);
  EXPECT_EQ(found.points[0].exact_coords, (std::vector<Rational>{Q("1/2"), Q("-3/2")}));
  const ChartField none = make_local_field(v, {P("x + y", v), P("x + y + 1", v)}, MultiPoly(v));
  EXPECT_TRUE(discover_zeros(none, ZeroSearch{}).points.empty());
}

TEST(DiscoverZeros, Errors) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField zero = make_local_field(v, {MultiPoly(v), MultiPoly(v)}, MultiPoly(v));
  EXPECT_THROW((void)discover_zeros(zero, ZeroSearch{}), PositiveDimensional);
  const ChartField line = make_local_field(v, {P("x", v), MultiPoly(v)}, MultiPoly(v));
  EXPECT_THROW((void)discover_zeros(line, ZeroSearch{}), PositiveDimensional);
  const ChartField quad = make_local_field(v, {P("x^2 - 1", v), P("y", v)}, MultiPoly(v));
  EXPECT_THROW((void)discover_zeros(quad, ZeroSearch{}), NonLinearField);
}

TEST(DiscoverZeros, NumericFindsBothRoots) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField quad = make_local_field(v, {P("x^2 - 1", v), P("y", v)}, MultiPoly(v));
  ZeroSearch search;
  search.kind = ZeroSearch::Kind::numeric;
  const auto found = discover_zeros(quad, search);
  EXPECT_FALSE(found.exhaustive);
  ASSERT_EQ(found.points.size(), 2U);
  std::vector<double> xs;
  for (const auto& p : found.points) {
    EXPECT_TRUE(p.is_exact());
    EXPECT_TRUE(p.simple);
    EXPECT_NEAR(std::abs(p.coords[1]), 0.0, 1e-12);
    xs.push_back(p.coords[0].real());
  }
  std::sort(xs.begin(), xs.end());
  EXPECT_NEAR(xs[0], -1.0, 1e-9);
  EXPECT_NEAR(xs[1], 1.0, 1e-9);
}

TEST(DiscoverZeros, IrrationalRootsStayApproximate) {
  const std::vector<std::string> v{"x"};
  const ChartField cf = make_local_field(v, {P("x^2 - 2", v)}, MultiPoly(v));
  ZeroSearch search;
  search.kind = ZeroSearch::Kind::numeric;
  const auto found = discover_zeros(cf, search);
  ASSERT_EQ(found.points.size(), 2U);
  for (const auto& p : found.points) {
    EXPECT_FALSE(p.is_exact());
    EXPECT_NEAR(std::abs(p.coords[0].real()), std::sqrt(2.0), 1e-10);
    EXPECT_GT(p.error_bound, 0.0);
  }
}

TEST(ClassifyPoint, Flags) {
  const std::vector<std::string> v{"x", "y"};
  const ChartField cf = make_local_field(v, {P("x", v), P("y", v)}, P("x*y", v));
  const auto p = classify_point(cf, origin(0, 2));
  EXPECT_TRUE(p.on_divisor);
  EXPECT_TRUE(p.divisor_singular);
  EXPECT_FALSE(p.adapted_index.has_value());
  EXPECT_THROW((void)classify_point(cf, SingularPoint::exact(0, {Rational(1), Rational(1)})), NotAZero);
  const auto approx = classify_point(cf, SingularPoint::approximate(0, {Complex(1e-10), Complex(0)}, 1e-10));
  EXPECT_TRUE(approx.on_divisor);
  EXPECT_THROW(
      (void)classify_point(cf, SingularPoint::approximate(0, {Complex(1e-3), Complex(0)}, 1e-10)),
      NotAZero);
}

TEST(Values, RenderAndArithmetic) {
  EXPECT_EQ(render(Value(Q("-56/20"))), "-14/5");
  const Value a = Approx{Complex(1.5, 0.0), 1e-9};
  const Value sum = a + Value(Rational(1));
  EXPECT_FALSE(is_exact(sum));
  EXPECT_DOUBLE_EQ(to_complex(sum).real(), 2.5);
  EXPECT_DOUBLE_EQ(error_of(sum), 1e-9);
  EXPECT_TRUE(is_exact(Value(Rational(1)) - Value(Rational(3))));
  EXPECT_NE(render(a).find("1.5"), std::string::npos);
}

}  // namespace
