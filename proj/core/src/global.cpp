#include "resilog/global.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "resilog/error.hpp"

namespace resilog {

std::vector<Rational> homogeneous_exact(const SingularPoint& p, std::size_t n) {
  if (!p.is_exact()) throw std::invalid_argument("homogeneous_exact needs an exact point");
  if (p.chart > n || p.exact_coords.size() != n) {
    throw DimensionMismatch("point does not belong to P^" + std::to_string(n));
  }
  std::vector<Rational> z(n + 1);
  z[p.chart] = Rational(1);
  std::size_t j = 0;
  for (std::size_t h = 0; h <= n; ++h) {
    if (h != p.chart) z[h] = p.exact_coords[j++];
  }
  return z;
}

CVector homogeneous_approx(const SingularPoint& p, std::size_t n) {
  if (p.chart > n || p.coords.size() != n) {
    throw DimensionMismatch("point does not belong to P^" + std::to_string(n));
  }
  CVector z(n + 1);
  z[p.chart] = 1.0;
  std::size_t j = 0;
  for (std::size_t h = 0; h <= n; ++h) {
    if (h != p.chart) z[h] = p.coords[j++];
  }
  return z;
}

SingularPoint canonical_representative(const SingularPoint& p, std::size_t n) {
  if (p.is_exact()) {
    const auto z = homogeneous_exact(p, n);
    std::size_t c = 0;
    while (z[c].is_zero()) ++c;  // z[p.chart] = 1 bounds the scan
    std::vector<Rational> coords;
    for (std::size_t h = 0; h <= n; ++h) {
      if (h != c) coords.push_back(z[h] / z[c]);
    }
    return SingularPoint::exact(c, std::move(coords));
  }
  const auto z = homogeneous_approx(p, n);
  std::size_t c = 0;
  while (std::abs(z[c]) <= kApproxZeroTol) ++c;
  CVector coords;
  for (std::size_t h = 0; h <= n; ++h) {
    if (h == c) continue;
    Complex v = z[h] / z[c];
    if (std::abs(v.real()) <= kApproxZeroTol) v.real(0.0);
    if (std::abs(v.imag()) <= kApproxZeroTol) v.imag(0.0);
    coords.push_back(v);
  }
  const double scale = std::max(1.0, 1.0 / std::abs(z[c]));
  return SingularPoint::approximate(c, std::move(coords), p.error_bound * scale * scale);
}

bool canonical_less(const SingularPoint& a, const SingularPoint& b) {
  if (a.chart != b.chart) return a.chart < b.chart;
  if (a.is_exact() != b.is_exact()) return a.is_exact();
  if (a.is_exact()) return a.exact_coords < b.exact_coords;
  for (std::size_t j = 0; j < a.coords.size(); ++j) {
    const Complex x = a.coords[j];
    const Complex y = b.coords[j];
    if (std::abs(x.real() - y.real()) > 1e-9) return x.real() < y.real();
    if (std::abs(x.imag() - y.imag()) > 1e-9) return x.imag() < y.imag();
  }
  return false;
}

std::size_t expected_zero_count(std::size_t n, unsigned d) {
  std::size_t total = 0;
  std::size_t power = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    total += power;
    power *= d;
  }
  return total;
}

std::string to_string(Enumeration::Mode mode) {
  switch (mode) {
    case Enumeration::Mode::exact_linear: return "exact_linear";
    case Enumeration::Mode::numeric: return "numeric";
    case Enumeration::Mode::user: return "user";
  }
  return "unknown";
}

namespace {

bool same_point(const SingularPoint& a, const SingularPoint& b, double radius) {
  if (a.chart != b.chart) return false;
  if (a.is_exact() && b.is_exact()) return a.exact_coords == b.exact_coords;
  return distance(a.coords, b.coords) <= radius;
}

// Adds p unless an equal point is present; exact points replace approximate ones.
void insert_unique(std::vector<SingularPoint>& points, SingularPoint p, double radius) {
  for (auto& q : points) {
    if (same_point(q, p, radius)) {
      if (!q.is_exact() && p.is_exact()) q = std::move(p);
      return;
    }
  }
  points.push_back(std::move(p));
}

SingularPoint polish(const ChartField& cf, SingularPoint p, const NumericConfig& cfg) {
  if (p.is_exact() || cf.dim() == 0) return p;
  PolySystem system(cf.a);
  const auto outcome = newton(system, p.coords, cfg);
  if (!outcome) throw NotAZero("Newton refinement from the supplied approximate point diverged");
  if (distance(outcome->root, p.coords) > 1e-3 * std::max(1.0, max_norm(p.coords))) {
    throw NotAZero("supplied approximate point is not close to a zero of the field");
  }
  return SingularPoint::approximate(p.chart, outcome->root,
                                    std::max(outcome->step, cfg.newton_tol));
}

}  // namespace

SingularSet enumerate_singularities(const FoliationProblem& problem, const Enumeration& mode) {
  SingularSet out;
  out.charts = verify_tangency(problem);
  const std::size_t n = problem.n;
  const double radius = std::max(mode.search.cfg.dedupe_radius, 1e-6);

  std::vector<SingularPoint> raw;
  bool exhaustive = true;
  switch (mode.mode) {
    case Enumeration::Mode::exact_linear:
    case Enumeration::Mode::numeric: {
      ZeroSearch search = mode.search;
      search.kind = mode.mode == Enumeration::Mode::exact_linear ? ZeroSearch::Kind::exact_linear
                                                                  : ZeroSearch::Kind::numeric;
      for (const auto& cf : out.charts) {
        auto found = discover_zeros(cf, search);
        exhaustive = exhaustive && found.exhaustive;
        for (auto& p : found.points) raw.push_back(std::move(p));
      }
      break;
    }
    case Enumeration::Mode::user:
      for (const auto& p : mode.user) {
        if (p.chart > n) throw InvalidProblem("point chart index out of range");
        const auto& cf = out.charts[p.chart];
        raw.push_back(classify_point(cf, polish(cf, p, mode.search.cfg)));
      }
      exhaustive = mode.user_attests_complete;
      break;
  }

  for (const auto& p : raw) {
    SingularPoint c = canonical_representative(p, n);
    c = classify_point(out.charts[c.chart], std::move(c));
    insert_unique(out.points, std::move(c), radius);
  }
  std::sort(out.points.begin(), out.points.end(), canonical_less);

  const bool all_simple = std::all_of(out.points.begin(), out.points.end(),
                                      [](const SingularPoint& p) { return p.simple; });
  const std::size_t expected = expected_zero_count(n, problem.d);
  if (all_simple && out.points.size() == expected) {
    if (!exhaustive) {
      out.notes.push_back("all " + std::to_string(expected) +
                          " zeros found and simple: the set is complete by the degree count");
    }
    exhaustive = true;
  } else if (all_simple && out.points.size() < expected) {
    if (exhaustive) {
      out.notes.push_back("only " + std::to_string(out.points.size()) + " of " +
                          std::to_string(expected) +
                          " zeros present although all are simple; the set is incomplete");
    }
    exhaustive = false;
  }
  if (mode.mode == Enumeration::Mode::numeric && !exhaustive) {
    out.notes.push_back("numeric search found " + std::to_string(out.points.size()) +
                        " zeros; completeness is not certified");
  }
  out.complete = exhaustive;
  return out;
}

std::string to_string(Certification c) {
  switch (c) {
    case Certification::proved_on_instance: return "proved_on_instance";
    case Certification::numeric: return "numeric";
    case Certification::partial: return "partial";
  }
  return "unknown";
}

double identity_tolerance(const Rational& expected) {
  return 1e-6 * std::max(1.0, std::abs(expected.to_double()));
}

bool is_zero_value(const Value& v, double tol) {
  if (const auto* r = std::get_if<Rational>(&v)) return r->is_zero();
  return std::abs(std::get<Approx>(v).value) <= tol;
}

bool is_nonnegative(const Value& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return r->sign() >= 0;
  const auto& a = std::get<Approx>(v);
  const double tol = std::max(1e-6, a.error);
  return a.value.real() >= -tol && std::abs(a.value.imag()) <= tol;
}

bool GlobalReport::all_hold() const {
  return !rows.empty() &&
         std::all_of(rows.begin(), rows.end(), [](const IdentityRow& r) { return r.holds; });
}

const IdentityRow* GlobalReport::row(std::size_t i) const {
  for (const auto& r : rows) {
    if (r.i == i) return &r;
  }
  return nullptr;
}

namespace {

struct Accumulator {
  std::optional<Value> total = Value(Rational(0));

  void add(const std::optional<Value>& v) {
    if (!total) return;
    if (!v) {
      total.reset();
      return;
    }
    total = *total + *v;
  }
};

std::optional<Value> gap(const std::optional<Value>& total, const Rational& expected) {
  if (!total) return std::nullopt;
  return *total - Value(expected);
}

bool gap_ok(const std::optional<Value>& g, const Rational& expected) {
  return g && is_zero_value(*g, identity_tolerance(expected));
}

}  // namespace

GlobalReport verify_identities(const FoliationProblem& problem, const SingularSet& set,
                               std::vector<std::size_t> i_list, const NumericConfig& cfg) {
  GlobalReport report;
  report.n = problem.n;
  report.d = problem.d;
  report.m = problem.m;
  report.complete = set.complete;
  report.notes = set.notes;
  if (i_list.empty()) {
    for (std::size_t i = 0; i < problem.n; ++i) i_list.push_back(i);
  }
  std::sort(i_list.begin(), i_list.end());
  i_list.erase(std::unique(i_list.begin(), i_list.end()), i_list.end());
  for (const auto i : i_list) {
    if (i >= problem.n) throw std::out_of_range("residue index i must satisfy 0 <= i < n");
  }

  const auto chern = chern_expectations(problem);
  bool all_exact = true;
  bool skipped = false;
  for (const auto i : i_list) {
    Accumulator ordinary;
    Accumulator log;
    Accumulator var;
    bool row_exact = true;
    for (const auto& p : set.points) {
      if (i >= 1 && !p.on_divisor) continue;
      if (p.divisor_singular) {
        if (i == 0 || p.on_divisor) {
          skipped = true;
          report.notes.push_back("i=" + std::to_string(i) +
                                 ": skipped a point where the divisor is singular");
        }
        continue;
      }
      ResidueRecord record = compute_residue(set.charts[p.chart], p, i, cfg);
      ordinary.add(record.ordinary);
      log.add(record.log);
      var.add(record.var);
      const bool exact = record.method == Method::closed_form && p.is_exact();
      row_exact = row_exact && exact;
      report.records.push_back(std::move(record));
    }
    IdentityRow row;
    row.i = i;
    row.ordinary_total = ordinary.total;
    row.log_total = log.total;
    row.var_total = var.total;
    row.expected_ordinary = chern.ordinary_total(i);
    row.expected_log = chern.log_total(i);
    row.expected_var = chern.var_total(i);
    row.ordinary_gap = gap(row.ordinary_total, row.expected_ordinary);
    row.log_gap = gap(row.log_total, row.expected_log);
    row.var_gap = gap(row.var_total, row.expected_var);
    row.exact = row_exact;
    // The variational identity always has a value; the other two are
    // required whenever every point supplied them.
    row.holds = gap_ok(row.var_gap, row.expected_var) &&
                (!row.ordinary_gap || gap_ok(row.ordinary_gap, row.expected_ordinary)) &&
                (!row.log_gap || gap_ok(row.log_gap, row.expected_log));
    if (!row.ordinary_total || !row.log_total) {
      report.notes.push_back("i=" + std::to_string(i) +
                             ": ordinary and logarithmic totals unavailable because some "
                             "point has vanishing cofactor");
    }
    all_exact = all_exact && row_exact;
    report.rows.push_back(std::move(row));
  }
  if (!set.complete || skipped) {
    report.level = Certification::partial;
  } else if (all_exact) {
    report.level = Certification::proved_on_instance;
  } else {
    report.level = Certification::numeric;
  }
  return report;
}

std::size_t poincare_index(std::size_t n) { return n % 2 == 1 ? 0 : 1; }

PoincareVerdict poincare_verdict(std::size_t n, unsigned d, unsigned m,
                                 const std::optional<Value>& total_log,
                                 const std::vector<Value>& local_logs, Certification level) {
  PoincareVerdict v;
  v.n = n;
  v.d = d;
  v.m = m;
  v.i_used = poincare_index(n);
  v.total_log_residue = total_log;
  v.level = level;
  v.bound_holds = m <= d + n;
  v.equality = m == d + n;
  v.all_local_nonnegative =
      !local_logs.empty() && std::all_of(local_logs.begin(), local_logs.end(), is_nonnegative);
  v.total_nonnegative = total_log && is_nonnegative(*total_log);
  v.bound_asserted = v.total_nonnegative && m > 0;
  if (!total_log) {
    v.notes.push_back("total logarithmic residue unavailable");
  } else if (!v.total_nonnegative) {
    v.notes.push_back("total logarithmic residue is negative: the hypothesis of the bound fails "
                      "and nothing is asserted");
  }
  if (v.bound_asserted && !v.bound_holds) {
    // (n + d - m)^(n - i) m^i >= 0 with n - i odd forces m <= n + d.
    v.notes.push_back("inconsistent: nonnegative total but m > d + n");
  }
  if (v.all_local_nonnegative) {
    v.notes.push_back("every local logarithmic residue is nonnegative");
  }
  return v;
}

PoincareVerdict poincare_check(const FoliationProblem& problem, const SingularSet& set,
                               const NumericConfig& cfg) {
  const std::size_t i = poincare_index(problem.n);
  const GlobalReport report = verify_identities(problem, set, {i}, cfg);
  std::vector<Value> locals;
  for (const auto& r : report.records) {
    if (r.log) locals.push_back(*r.log);
  }
  PoincareVerdict v = poincare_verdict(problem.n, problem.d, problem.m, report.rows.front().log_total,
                                       locals, report.level);
  for (const auto& note : report.notes) v.notes.push_back(note);
  return v;
}

SurfaceReport surface_summary(unsigned d, unsigned m, std::vector<SurfaceRow> rows,
                              Certification level) {
  SurfaceReport out;
  out.d = d;
  out.m = m;
  out.level = level;
  out.expected_gsv = Rational(static_cast<long>(2 + d) - static_cast<long>(m)) *
                     Rational(static_cast<long>(m));
  out.expected_cs = Rational(static_cast<long>(m)).pow(2);
  Value gsv = Rational(0);
  Value cs = Rational(0);
  for (const auto& r : rows) {
    gsv = gsv + r.gsv;
    cs = cs + r.cs;
  }
  out.gsv_total = gsv;
  out.cs_total = cs;
  out.rows = std::move(rows);
  out.totals_match = is_zero_value(gsv - Value(out.expected_gsv), identity_tolerance(out.expected_gsv)) &&
                     is_zero_value(cs - Value(out.expected_cs), identity_tolerance(out.expected_cs));
  out.all_gsv_nonnegative = std::all_of(out.rows.begin(), out.rows.end(),
                                        [](const SurfaceRow& r) { return is_nonnegative(r.gsv); });
  out.bound_asserted = out.all_gsv_nonnegative && is_nonnegative(gsv);
  out.equality_flag = is_zero_value(gsv, identity_tolerance(Rational(0)));
  if (!out.bound_asserted) {
    out.notes.push_back("some GSV index is negative: the hypothesis of the bound m <= d + 2 fails "
                        "and the bound is not asserted");
  } else if (m > d + 2) {
    out.notes.push_back("inconsistent: nonnegative GSV indices but m > d + 2");
  }
  if (out.equality_flag) {
    out.notes.push_back("GSV total vanishes: consistent with the generalized-curve equality case "
                        "m = d + 2 (reported, not certified)");
  }
  return out;
}

SurfaceReport surface_report(const FoliationProblem& problem, const SingularSet& set,
                             const NumericConfig& cfg) {
  if (problem.n != 2) throw NotSupported("the surface report needs n = 2");
  const GlobalReport report = verify_identities(problem, set, {1}, cfg);
  std::vector<SurfaceRow> rows;
  for (const auto& r : report.records) {
    if (!r.ordinary || !r.log || !r.var) continue;
    rows.push_back({r.point, *r.log, *r.var, *r.ordinary, r.method});
  }
  SurfaceReport out = surface_summary(problem.d, problem.m, std::move(rows), report.level);
  for (const auto& note : report.notes) out.notes.push_back(note);
  return out;
}

}  // namespace resilog
