#include "resilog/residue.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "resilog/error.hpp"
#include "resilog/matrix.hpp"

namespace resilog {

SingularPoint SingularPoint::exact(std::size_t chart, std::vector<Rational> coords) {
  SingularPoint p;
  p.chart = chart;
  for (const auto& c : coords) p.coords.emplace_back(c.to_double(), 0.0);
  p.exact_coords = std::move(coords);
  p.exactness = Exactness::exact;
  return p;
}

SingularPoint SingularPoint::approximate(std::size_t chart, CVector coords, double error_bound) {
  SingularPoint p;
  p.chart = chart;
  p.coords = std::move(coords);
  p.exactness = Exactness::approximate;
  p.error_bound = error_bound;
  return p;
}

// ---------------------------------------------------------------------------
// Values

bool is_exact(const Value& v) { return std::holds_alternative<Rational>(v); }

Complex to_complex(const Value& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return {r->to_double(), 0.0};
  return std::get<Approx>(v).value;
}

double error_of(const Value& v) {
  if (const auto* a = std::get_if<Approx>(&v)) return a->error;
  return 0.0;
}

Value operator+(const Value& a, const Value& b) {
  if (is_exact(a) && is_exact(b)) return std::get<Rational>(a) + std::get<Rational>(b);
  return Approx{to_complex(a) + to_complex(b), error_of(a) + error_of(b)};
}

Value operator-(const Value& a, const Value& b) {
  if (is_exact(a) && is_exact(b)) return std::get<Rational>(a) - std::get<Rational>(b);
  return Approx{to_complex(a) - to_complex(b), error_of(a) + error_of(b)};
}

std::string render(const Value& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return r->str();
  const auto& a = std::get<Approx>(v);
  char buf[128];
  if (std::abs(a.value.imag()) <= std::max(a.error, 1e-12)) {
    std::snprintf(buf, sizeof buf, "%.12g±%.2g", a.value.real(), a.error);
  } else {
    std::snprintf(buf, sizeof buf, "(%.12g%+.12gi)±%.2g", a.value.real(), a.value.imag(),
                  a.error);
  }
  return buf;
}

std::string to_string(Method m) {
  return m == Method::closed_form ? "closed_form" : "perturbation";
}

// ---------------------------------------------------------------------------
// Scalar back ends for exact and approximate points

namespace {

struct ExactOps {
  using Scalar = Rational;
  static Rational eval(const MultiPoly& p, const SingularPoint& x) {
    return p.eval(x.exact_coords);
  }
  static bool zero(const Rational& v) { return v.is_zero(); }
  static Rational det(const std::vector<std::vector<Rational>>& rows) {
    RatMatrix m(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return det_exact(m);
  }
};

struct ApproxOps {
  using Scalar = Complex;
  static Complex eval(const MultiPoly& p, const SingularPoint& x) { return p.eval(x.coords); }
  static bool zero(const Complex& v) { return std::abs(v) <= kApproxZeroTol; }
  static Complex det(const std::vector<std::vector<Complex>>& rows) {
    CMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m.det();
  }
};

void require_dimension(const ChartField& cf, const SingularPoint& p) {
  if (p.coords.size() != cf.dim() || (p.is_exact() && p.exact_coords.size() != cf.dim())) {
    throw DimensionMismatch("point has " + std::to_string(p.coords.size()) +
                            " coordinates, chart has " + std::to_string(cf.dim()));
  }
}

template <class Ops>
void require_zero(const ChartField& cf, const SingularPoint& p) {
  for (std::size_t j = 0; j < cf.dim(); ++j) {
    if (!Ops::zero(Ops::eval(cf.a[j], p))) {
      throw NotAZero("component " + cf.vars[j] + " of the field does not vanish at the point");
    }
  }
}

template <class Ops>
std::vector<std::vector<typename Ops::Scalar>> jacobian_at(const std::vector<MultiPoly>& a,
                                                           const SingularPoint& p) {
  std::vector<std::vector<typename Ops::Scalar>> rows(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t l = 0; l < a.size(); ++l) rows[j].push_back(Ops::eval(a[j].partial(l), p));
  }
  return rows;
}

template <class Ops>
BasicLocalData<typename Ops::Scalar> local_data_impl(const ChartField& cf, const SingularPoint& p,
                                                     std::optional<std::size_t> s_override) {
  using S = typename Ops::Scalar;
  require_dimension(cf, p);
  if (!cf.has_cofactor) throw InvalidProblem("chart cofactor has not been extracted");
  require_zero<Ops>(cf, p);
  const std::size_t n = cf.dim();

  BasicLocalData<S> out;
  const auto jac = jacobian_at<Ops>(cf.a, p);
  out.trJ = S(0);
  for (std::size_t j = 0; j < n; ++j) out.trJ += jac[j][j];
  out.detJ = Ops::det(jac);
  out.k_at_p = Ops::eval(cf.k, p);

  if (!cf.has_divisor() || !Ops::zero(Ops::eval(cf.f, p))) return out;

  std::vector<S> grad;
  for (std::size_t l = 0; l < n; ++l) grad.push_back(Ops::eval(cf.f.partial(l), p));
  std::optional<std::size_t> s;
  if (s_override) {
    if (*s_override >= n || Ops::zero(grad[*s_override])) {
      throw std::invalid_argument("adapted index must have df/dx_s(p) != 0");
    }
    s = s_override;
  } else {
    for (std::size_t l = 0; l < n && !s; ++l) {
      if (!Ops::zero(grad[l])) s = l;
    }
  }
  if (!s) {
    throw DivisorSingularAt(
        "the divisor is singular at this point; residues at singular points of D are not "
        "supported");
  }
  // Rows: gradients of a_j (j != s) in index order, then grad f. Dividing by
  // df/dx_s and moving slot s to the end yields the determinant of the
  // induced field in the adapted coordinates (x_{j != s}, f).
  std::vector<std::vector<S>> rows;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != *s) rows.push_back(jac[j]);
  }
  rows.push_back(grad);
  S detJD = Ops::det(rows) / grad[*s];
  if ((n - 1 - *s) % 2 == 1) detJD = -detJD;

  out.s = s;
  out.trJD = out.trJ - out.k_at_p;
  out.detJD = detJD;
  return out;
}

template <class S>
struct Triple {
  std::optional<S> ordinary;
  std::optional<S> log;
  std::optional<S> var;
};

template <class Ops>
Triple<typename Ops::Scalar> closed_form(const BasicLocalData<typename Ops::Scalar>& ld,
                                              std::size_t n, std::size_t i) {
  using S = typename Ops::Scalar;
  using detail::ipow;
  Triple<S> out;
  if (!ld.trJD) {
    if (i >= 1) throw NotOnDivisor("residues with i >= 1 exist only at points of the divisor");
    if (Ops::zero(ld.detJ)) throw DegenerateZero("ambient Jacobian is singular at this zero");
    const S ordinary = ipow(ld.trJ, n) / ld.detJ;
    out.ordinary = ordinary;
    out.log = ordinary;
    out.var = S(0);
    return out;
  }
  const S& T = *ld.trJD;
  const S& k = ld.k_at_p;
  const S& detJD = *ld.detJD;
  if (Ops::zero(detJD)) throw DegenerateZero("induced Jacobian on the divisor is singular");
  if (i == 0) {
    const S var = delta_numerator(T, k, n, 0) / detJD;
    out.var = var;
    if (!Ops::zero(ld.detJ)) {
      const S ordinary = ipow(ld.trJ, n) / ld.detJ;
      out.ordinary = ordinary;
      out.log = ordinary - var;
    }
    return out;
  }
  out.ordinary = ipow(ld.trJ, n - i) * ipow(k, i - 1) / detJD;
  out.log = ipow(T, n - i) * ipow(k, i - 1) / detJD;
  out.var = delta_numerator(T, k, n, i) / detJD;
  return out;
}

Value approx_value(const Complex& v, const SingularPoint& p) {
  const double scale = 1.0 + std::abs(v);
  return Approx{v, scale * std::max(1e-12, 100.0 * p.error_bound)};
}

std::string point_tag(const SingularPoint& p) {
  std::string tag = "c" + std::to_string(p.chart) + ":";
  char buf[64];
  for (const auto& c : p.coords) {
    std::snprintf(buf, sizeof buf, "%.9e,%.9e;", c.real(), c.imag());
    tag += buf;
  }
  return tag;
}

}  // namespace

template <>
Rational delta_numerator<Rational>(const Rational& T, const Rational& k, std::size_t n,
                                   std::size_t i) {
  using detail::ipow;
  Rational sum;
  if (i == 0) {
    for (std::size_t l = 1; l <= n; ++l) {
      sum += binomial(static_cast<unsigned>(n), static_cast<unsigned>(l)) * ipow(T, n - l) *
             ipow(k, l - 1);
    }
    return sum;
  }
  for (std::size_t l = 1; l <= n - i; ++l) {
    sum += binomial(static_cast<unsigned>(n - i), static_cast<unsigned>(l)) *
           ipow(T, n - i - l) * ipow(k, l);
  }
  return ipow(k, i - 1) * sum;
}

SingularPoint classify_point(const ChartField& cf, SingularPoint p) {
  require_dimension(cf, p);
  auto fill = [&](const auto& ld, auto zero) {
    p.simple = !zero(ld.detJ);
    p.on_divisor = ld.trJD.has_value();
    p.adapted_index = ld.s;
    p.simple_on_divisor = ld.detJD && !zero(*ld.detJD);
  };
  p.divisor_singular = false;
  try {
    if (p.is_exact()) {
      fill(local_data_impl<ExactOps>(cf, p, std::nullopt), ExactOps::zero);
    } else {
      fill(local_data_impl<ApproxOps>(cf, p, std::nullopt), ApproxOps::zero);
    }
  } catch (const DivisorSingularAt&) {
    p.on_divisor = true;
    p.divisor_singular = true;
    p.adapted_index.reset();
    p.simple_on_divisor = false;
    if (p.is_exact()) {
      p.simple = !det_exact([&] {
                    const auto rows = jacobian_at<ExactOps>(cf.a, p);
                    RatMatrix m(rows.size(), rows.size());
                    for (std::size_t i = 0; i < rows.size(); ++i) {
                      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
                    }
                    return m;
                  }())
                    .is_zero();
    } else {
      p.simple = !ApproxOps::zero(ApproxOps::det(jacobian_at<ApproxOps>(cf.a, p)));
    }
  }
  return p;
}

LocalData local_data(const ChartField& cf, const SingularPoint& p, std::optional<std::size_t> s) {
  if (!p.is_exact()) throw std::invalid_argument("local_data needs an exact point");
  return local_data_impl<ExactOps>(cf, p, s);
}

ApproxLocalData local_data_approx(const ChartField& cf, const SingularPoint& p,
                                  std::optional<std::size_t> s) {
  return local_data_impl<ApproxOps>(cf, p, s);
}

ResidueRecord simple_residues(const ChartField& cf, const SingularPoint& p, std::size_t i,
                              std::optional<std::size_t> s) {
  const std::size_t n = cf.dim();
  if (i >= n) throw std::out_of_range("residue index i must satisfy 0 <= i < n");
  ResidueRecord record;
  record.i = i;
  record.method = Method::closed_form;
  if (p.is_exact()) {
    const auto ld = local_data_impl<ExactOps>(cf, p, s);
    const auto t = closed_form<ExactOps>(ld, n, i);
    if (t.ordinary) record.ordinary = *t.ordinary;
    if (t.log) record.log = *t.log;
    if (t.var) record.var = *t.var;
  } else {
    const auto ld = local_data_impl<ApproxOps>(cf, p, s);
    const auto t = closed_form<ApproxOps>(ld, n, i);
    if (t.ordinary) record.ordinary = approx_value(*t.ordinary, p);
    if (t.log) record.log = approx_value(*t.log, p);
    if (t.var) record.var = approx_value(*t.var, p);
  }
  if (!record.ordinary) {
    record.notes.push_back(
        "cofactor vanishes at the point: ambient zero is degenerate, only the variational "
        "residue is available");
  }
  record.point = classify_point(cf, p);
  return record;
}

// ---------------------------------------------------------------------------
// Perturbation engine

namespace {

struct InducedField {
  std::vector<MultiPoly> a;  // components along x_j, j != s, restricted to D
  MultiPoly k;
  CVector center;
};

InducedField induce_on_divisor(const ChartField& cf, const SingularPoint& p) {
  const std::size_t n = cf.dim();
  for (std::size_t s = 0; s < n; ++s) {
    if (cf.f.degree_in(s) == 0) continue;
    std::optional<Rational> level;
    if (p.is_exact()) {
      const Rational c = p.exact_coords[s];
      const MultiPoly factor =
          MultiPoly::variable(cf.vars, s) - MultiPoly::constant(cf.vars, c);
      const auto unit = exact_divide(cf.f, factor);
      if (unit && !unit->eval(p.exact_coords).is_zero()) level = c;
    } else if (cf.f.total_degree() == 1 && cf.f.degree_in(s) == 1) {
      Exponent e(n, 0);
      e[s] = 1;
      const Rational alpha = cf.f.coefficient(e);
      const Rational beta = cf.f.constant_term();
      if (cf.f.size() == (beta.is_zero() ? 1U : 2U)) {
        const Rational c = -beta / alpha;
        if (std::abs(p.coords[s] - Complex(c.to_double(), 0.0)) <= kApproxZeroTol) level = c;
      }
    }
    if (!level) continue;
    InducedField out;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == s) continue;
      out.a.push_back(cf.a[j].substitute(s, *level));
      out.center.push_back(p.coords[j]);
    }
    out.k = cf.k.substitute(s, *level);
    return out;
  }
  throw NotSupported(
      "degenerate zero on a divisor that is not locally a coordinate hyperplane; perturbation "
      "inside a curved hypersurface is not supported");
}

// Sum of `contribution(root, jacobian)` over the perturbed zeros near
// `center` for each eps level, then Richardson extrapolation.
template <class Contribution>
std::vector<Approx> perturbation_sums(const std::vector<MultiPoly>& components,
                                      const CVector& center, const std::string& tag,
                                      const NumericConfig& cfg, std::size_t nvalues,
                                      Contribution contribution) {
  std::vector<std::vector<Complex>> level_sums;
  std::vector<std::size_t> counts;
  if (components.empty()) {
    // Zero-dimensional system: the point itself is the only zero.
    const auto values = contribution(CVector{}, CMatrix(0));
    std::vector<Approx> out;
    for (const auto& v : values) out.push_back({v, 0.0});
    return out;
  }
  PolySystem system(components);
  std::mt19937_64 rng(derive_seed(cfg.seed, tag));
  AffinePerturbation perturbation = random_affine(components.size(), center, rng);
  const auto starts = polydisk_starts(center, cfg.search_radius, cfg.grid_per_axis);
  for (const double eps : cfg.eps_levels) {
    perturbation.eps = eps;
    system.set_perturbation(perturbation);
    const auto roots = multi_start(system, starts, cfg);
    std::vector<Complex> sums(nvalues);
    std::size_t count = 0;
    for (const auto& r : roots) {
      const double dist = distance(r.root, center);
      if (std::abs(dist - cfg.search_radius) < cfg.dedupe_radius) {
        throw BoundaryZero("a perturbed zero lies on the search boundary; increase "
                           "search_radius or isolate the point");
      }
      if (dist > cfg.search_radius) continue;
      const auto values = contribution(r.root, system.jacobian(r.root));
      for (std::size_t v = 0; v < nvalues; ++v) sums[v] += values[v];
      ++count;
    }
    if (count == 0) throw NewtonDivergence("no perturbed zero found near the point");
    level_sums.push_back(std::move(sums));
    counts.push_back(count);
  }
  if (counts[0] != counts[1]) {
    throw ZeroCountUnstable("perturbed zero count changed between eps levels (" +
                            std::to_string(counts[0]) + " vs " + std::to_string(counts[1]) +
                            ")");
  }
  const double ratio = cfg.eps_levels[0] / cfg.eps_levels[1];
  std::vector<Approx> out;
  for (std::size_t v = 0; v < nvalues; ++v) {
    const Complex coarse = level_sums[0][v];
    const Complex fine = level_sums[1][v];
    out.push_back({(ratio * fine - coarse) / (ratio - 1.0), std::abs(fine - coarse)});
  }
  return out;
}

}  // namespace

ResidueRecord perturbed_residue(const ChartField& cf, const SingularPoint& p, std::size_t i,
                                const NumericConfig& cfg) {
  cfg.validate();
  const std::size_t n = cf.dim();
  if (i >= n) throw std::out_of_range("residue index i must satisfy 0 <= i < n");
  if (!cf.has_cofactor) throw InvalidProblem("chart cofactor has not been extracted");
  const SingularPoint point = classify_point(cf, p);
  if (point.on_divisor && point.divisor_singular) {
    throw DivisorSingularAt("the divisor is singular at this point");
  }
  if (i >= 1 && !point.on_divisor) {
    throw NotOnDivisor("residues with i >= 1 exist only at points of the divisor");
  }
  using detail::ipow;
  const std::string tag = point_tag(point);

  ResidueRecord record;
  record.point = point;
  record.i = i;
  record.method = Method::perturbation;

  std::optional<Approx> ambient_ordinary;
  if (i == 0) {
    const auto sums = perturbation_sums(
        cf.a, point.coords, tag + "ambient", cfg, 1, [n](const CVector&, const CMatrix& jac) {
          return std::vector<Complex>{ipow(jac.trace(), n) / jac.det()};
        });
    ambient_ordinary = sums[0];
  }
  if (!point.on_divisor) {
    record.ordinary = *ambient_ordinary;
    record.log = *ambient_ordinary;
    record.var = Rational(0);
    return record;
  }

  const InducedField induced = induce_on_divisor(cf, point);
  const CompiledPoly k_bar(induced.k);
  const auto sums = perturbation_sums(
      induced.a, induced.center, tag + "induced", cfg, 3,
      [&](const CVector& q, const CMatrix& jac) {
        const Complex T = jac.trace();
        const Complex k = k_bar(q);
        const Complex det = jac.det();
        if (i == 0) {
          return std::vector<Complex>{Complex{}, Complex{}, delta_numerator(T, k, n, 0) / det};
        }
        return std::vector<Complex>{ipow(T + k, n - i) * ipow(k, i - 1) / det,
                                    ipow(T, n - i) * ipow(k, i - 1) / det,
                                    delta_numerator(T, k, n, i) / det};
      });
  if (i == 0) {
    record.ordinary = *ambient_ordinary;
    record.var = sums[2];
    record.log = Value(*ambient_ordinary) - Value(sums[2]);
  } else {
    record.ordinary = sums[0];
    record.log = sums[1];
    record.var = sums[2];
  }
  return record;
}

ResidueRecord compute_residue(const ChartField& cf, const SingularPoint& p, std::size_t i,
                              const NumericConfig& cfg) {
  try {
    return simple_residues(cf, p, i);
  } catch (const DegenerateZero&) {
    ResidueRecord record = perturbed_residue(cf, p, i, cfg);
    record.notes.push_back("degenerate zero: values obtained by perturbation");
    return record;
  }
}

// ---------------------------------------------------------------------------
// Zero discovery

namespace {

// Best rational approximation with denominator <= max_den, if within tol.
std::optional<Rational> snap(double x, long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0;
    const long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) {
      return Rational(h1, k1);
    }
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

std::optional<SingularPoint> promote(const ChartField& cf, const CVector& root) {
  std::vector<Rational> exact;
  for (const auto& c : root) {
    if (std::abs(c.imag()) > 1e-9) return std::nullopt;
    const auto r = snap(c.real(), 10000, 1e-9);
    if (!r) return std::nullopt;
    exact.push_back(*r);
  }
  for (const auto& a : cf.a) {
    if (!a.eval(exact).is_zero()) return std::nullopt;
  }
  return SingularPoint::exact(cf.chart, std::move(exact));
}

}  // namespace

DiscoveryResult discover_zeros(const ChartField& cf, const ZeroSearch& search) {
  const std::size_t n = cf.dim();
  DiscoveryResult out;
  if (search.kind == ZeroSearch::Kind::exact_linear) {
    RatMatrix A(n, n);
    std::vector<Rational> rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (!cf.a[j].is_affine_linear()) {
        throw NonLinearField("component " + cf.vars[j] + " is not affine-linear");
      }
      for (std::size_t l = 0; l < n; ++l) {
        Exponent e(n, 0);
        e[l] = 1;
        A(j, l) = cf.a[j].coefficient(e);
      }
      rhs[j] = -cf.a[j].constant_term();
    }
    const auto solution = solve_affine(A, rhs);
    out.exhaustive = true;
    if (!solution.consistent) return out;
    if (solution.nullity > 0) {
      throw PositiveDimensional("chart " + std::to_string(cf.chart) + ": zero set has dimension " +
                                std::to_string(solution.nullity));
    }
    out.points.push_back(classify_point(cf, SingularPoint::exact(cf.chart, solution.particular)));
    return out;
  }

  search.cfg.validate();
  PolySystem system(cf.a);
  const auto starts = box_starts(n, search.lo, search.hi, search.imag, search.grid);
  for (const auto& r : multi_start(system, starts, search.cfg)) {
    bool inside = true;
    for (const auto& c : r.root) {
      if (c.real() < search.lo - 1e-9 || c.real() > search.hi + 1e-9) inside = false;
    }
    if (!inside) continue;
    if (auto exact = promote(cf, r.root)) {
      out.points.push_back(classify_point(cf, std::move(*exact)));
    } else {
      out.points.push_back(classify_point(
          cf, SingularPoint::approximate(cf.chart, r.root,
                                         std::max(r.step, search.cfg.newton_tol))));
    }
  }
  out.exhaustive = false;
  return out;
}

}  // namespace resilog
