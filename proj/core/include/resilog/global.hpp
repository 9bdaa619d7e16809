#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "resilog/foliation.hpp"
#include "resilog/residue.hpp"

namespace resilog {

// Homogeneous coordinates of a chart point (z_chart = 1).
std::vector<Rational> homogeneous_exact(const SingularPoint& p, std::size_t n);
CVector homogeneous_approx(const SingularPoint& p, std::size_t n);

// Moves p to the lowest-index chart containing it, i.e. scales so that the
// first nonzero homogeneous coordinate is 1. Classification flags are
// cleared; call classify_point against the new chart.
SingularPoint canonical_representative(const SingularPoint& p, std::size_t n);

// Total ordering used for reports: chart, then exact before approximate,
// then coordinates.
bool canonical_less(const SingularPoint& a, const SingularPoint& b);

// Number of zeros, with multiplicity, of a generic degree-d foliation on P^n:
// 1 + d + ... + d^n.
std::size_t expected_zero_count(std::size_t n, unsigned d);

struct Enumeration {
  enum class Mode { exact_linear, numeric, user };
  Mode mode = Mode::exact_linear;
  ZeroSearch search;                 // numeric mode
  std::vector<SingularPoint> user;   // user mode, in any chart
  bool user_attests_complete = true;
};

std::string to_string(Enumeration::Mode mode);

struct SingularSet {
  std::vector<ChartField> charts;    // cofactors extracted
  std::vector<SingularPoint> points; // canonical, classified, sorted, deduped
  bool complete = false;
  std::vector<std::string> notes;
};

// Throws NotTangent, NonLinearField, PositiveDimensional, NotAZero,
// DimensionMismatch.
SingularSet enumerate_singularities(const FoliationProblem& problem, const Enumeration& mode);

enum class Certification { proved_on_instance, numeric, partial };
std::string to_string(Certification c);

// Loosest acceptable gap for approximate totals: 1e-6 * max(1, |expected|).
double identity_tolerance(const Rational& expected);

struct IdentityRow {
  std::size_t i = 0;
  // Totals are absent when some point could not provide the value.
  std::optional<Value> ordinary_total;
  std::optional<Value> log_total;
  std::optional<Value> var_total;
  Rational expected_ordinary;
  Rational expected_log;
  Rational expected_var;
  std::optional<Value> ordinary_gap;  // total - expected
  std::optional<Value> log_gap;
  std::optional<Value> var_gap;
  bool exact = true;
  bool holds = false;
};

struct GlobalReport {
  std::size_t n = 0;
  unsigned d = 0;
  unsigned m = 0;
  std::vector<ResidueRecord> records;  // grouped by i, canonical point order
  std::vector<IdentityRow> rows;
  bool complete = false;
  Certification level = Certification::partial;
  std::vector<std::string> notes;

  [[nodiscard]] bool all_hold() const;
  [[nodiscard]] const IdentityRow* row(std::size_t i) const;
};

// i_list empty means every i in 0..n-1.
GlobalReport verify_identities(const FoliationProblem& problem, const SingularSet& set,
                               std::vector<std::size_t> i_list = {},
                               const NumericConfig& cfg = {});

struct PoincareVerdict {
  std::size_t n = 0;
  unsigned d = 0;
  unsigned m = 0;
  std::size_t i_used = 0;  // n - i_used is odd
  std::optional<Value> total_log_residue;
  bool total_nonnegative = false;
  bool all_local_nonnegative = false;  // the sufficient per-point condition
  bool bound_asserted = false;         // m <= d + n deduced from the total
  bool bound_holds = false;            // the integer comparison itself
  bool equality = false;               // m == d + n
  Certification level = Certification::partial;
  std::vector<std::string> notes;
};

std::size_t poincare_index(std::size_t n);

// Pure verdict from a computed total and the local values.
PoincareVerdict poincare_verdict(std::size_t n, unsigned d, unsigned m,
                                 const std::optional<Value>& total_log,
                                 const std::vector<Value>& local_logs, Certification level);

PoincareVerdict poincare_check(const FoliationProblem& problem, const SingularSet& set,
                               const NumericConfig& cfg = {});

struct SurfaceRow {
  SingularPoint point;
  Value gsv;       // log residue, i = 1
  Value cs;        // variational residue, i = 1
  Value ordinary;  // ordinary residue, i = 1
  Method method = Method::closed_form;
};

struct SurfaceReport {
  unsigned d = 0;
  unsigned m = 0;
  std::vector<SurfaceRow> rows;
  std::optional<Value> gsv_total;
  std::optional<Value> cs_total;
  Rational expected_gsv;  // (2 + d - m) m
  Rational expected_cs;   // m^2
  bool totals_match = false;
  bool all_gsv_nonnegative = false;
  bool bound_asserted = false;  // m <= d + 2
  bool equality_flag = false;   // GSV total vanishes
  Certification level = Certification::partial;
  std::vector<std::string> notes;
};

// Pure assembly from per-point rows.
SurfaceReport surface_summary(unsigned d, unsigned m, std::vector<SurfaceRow> rows,
                              Certification level);

// Throws NotSupported when n != 2.
SurfaceReport surface_report(const FoliationProblem& problem, const SingularSet& set,
                             const NumericConfig& cfg = {});

// Sign tests with the identity tolerance for approximate values.
bool is_nonnegative(const Value& v);
bool is_zero_value(const Value& v, double tol);

}  // namespace resilog
