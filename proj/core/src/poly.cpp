#include "resilog/poly.hpp"

#include <algorithm>

#include "resilog/error.hpp"

namespace resilog {

bool LexGreater::operator()(const Exponent& lhs, const Exponent& rhs) const {
  return std::lexicographical_compare(rhs.begin(), rhs.end(), lhs.begin(), lhs.end());
}

MultiPoly::MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

MultiPoly MultiPoly::constant(std::vector<std::string> vars, const Rational& value) {
  MultiPoly out(std::move(vars));
  out.add_term(Exponent(out.nvars(), 0), value);
  return out;
}

MultiPoly MultiPoly::variable(std::vector<std::string> vars, std::string_view name) {
  MultiPoly out(std::move(vars));
  return variable(out.vars_, out.variable_index(name));
}

MultiPoly MultiPoly::variable(std::vector<std::string> vars, std::size_t index) {
  MultiPoly out(std::move(vars));
  if (index >= out.nvars()) throw UnknownVariable("variable index out of range");
  Exponent e(out.nvars(), 0);
  e[index] = 1;
  out.add_term(e, Rational(1));
  return out;
}

MultiPoly MultiPoly::monomial(std::vector<std::string> vars, Exponent exponent,
                              const Rational& coefficient) {
  MultiPoly out(std::move(vars));
  if (exponent.size() != out.nvars()) throw DimensionMismatch("exponent length mismatch");
  out.add_term(exponent, coefficient);
  return out;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 &&
          std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                      [](unsigned e) { return e == 0; }));
}

Rational MultiPoly::constant_term() const { return coefficient(Exponent(nvars(), 0)); }

Rational MultiPoly::coefficient(const Exponent& exponent) const {
  const auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

namespace {

unsigned exponent_sum(const Exponent& e) {
  unsigned s = 0;
  for (const unsigned x : e) s += x;
  return s;
}

}  // namespace

int MultiPoly::total_degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) best = std::max(best, static_cast<int>(exponent_sum(e)));
  return best;
}

unsigned MultiPoly::degree_in(std::size_t var) const {
  unsigned best = 0;
  for (const auto& [e, c] : terms_) best = std::max(best, e.at(var));
  return best;
}

std::optional<unsigned> MultiPoly::homogeneous_degree() const {
  if (terms_.empty()) return std::nullopt;
  const unsigned first = exponent_sum(terms_.begin()->first);
  for (const auto& [e, c] : terms_) {
    if (exponent_sum(e) != first) return std::nullopt;
  }
  return first;
}

std::size_t MultiPoly::variable_index(std::string_view name) const {
  const auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) throw UnknownVariable("unknown variable '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - vars_.begin());
}

void MultiPoly::add_term(const Exponent& exponent, const Rational& coefficient) {
  if (coefficient.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

MultiPoly MultiPoly::with_variables(const std::vector<std::string>& vars) const {
  if (vars == vars_) return *this;
  std::vector<std::size_t> target(vars_.size());
  std::vector<bool> present(vars_.size(), false);
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto it = std::find(vars.begin(), vars.end(), vars_[i]);
    if (it != vars.end()) {
      target[i] = static_cast<std::size_t>(it - vars.begin());
      present[i] = true;
    }
  }
  MultiPoly out(vars);
  for (const auto& [e, c] : terms_) {
    Exponent moved(vars.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!present[i]) throw UnknownVariable("variable '" + vars_[i] + "' has no target");
      moved[target[i]] = e[i];
    }
    out.add_term(moved, c);
  }
  return out;
}

std::vector<std::string> merge_variables(const std::vector<std::string>& a,
                                         const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& name : b) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  return out;
}

namespace {

// Brings both operands onto one variable list.
void align(MultiPoly& lhs, MultiPoly& rhs) {
  if (lhs.vars() == rhs.vars()) return;
  const auto merged = merge_variables(lhs.vars(), rhs.vars());
  lhs = lhs.with_variables(merged);
  rhs = rhs.with_variables(merged);
}

}  // namespace

MultiPoly& MultiPoly::operator+=(const MultiPoly& rhs) {
  MultiPoly other = rhs;
  align(*this, other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& rhs) {
  MultiPoly other = rhs;
  align(*this, other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& rhs) {
  MultiPoly other = rhs;
  align(*this, other);
  MultiPoly out(vars_);
  Exponent e(vars_.size());
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  *this = std::move(out);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& scalar) {
  if (scalar.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= scalar;
  return *this;
}

MultiPoly operator-(const MultiPoly& p) {
  MultiPoly out = p;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

MultiPoly MultiPoly::pow(unsigned exponent) const {
  MultiPoly result = constant(vars_, Rational(1));
  MultiPoly base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base *= base;
  }
  return result;
}

MultiPoly MultiPoly::partial(std::string_view var) const { return partial(variable_index(var)); }

MultiPoly MultiPoly::partial(std::size_t var) const {
  if (var >= nvars()) throw UnknownVariable("variable index out of range");
  MultiPoly out(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent d = e;
    d[var] -= 1;
    out.add_term(d, c * Rational(static_cast<long>(e[var])));
  }
  return out;
}

namespace {

template <class Scalar>
Scalar power(const Scalar& base, unsigned exponent) {
  Scalar result(1);
  Scalar b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

// Cached powers per variable so each term costs one product chain.
template <class Scalar>
class PowerTable {
 public:
  explicit PowerTable(std::span<const Scalar> point) : point_(point), cache_(point.size()) {}
  const Scalar& get(std::size_t var, unsigned exponent) {
    auto& row = cache_[var];
    if (row.empty()) row.push_back(Scalar(1));
    while (row.size() <= exponent) row.push_back(row.back() * point_[var]);
    return row[exponent];
  }

 private:
  std::span<const Scalar> point_;
  std::vector<std::vector<Scalar>> cache_;
};

}  // namespace

Rational MultiPoly::eval(std::span<const Rational> point) const {
  if (point.size() != nvars()) throw DimensionMismatch("evaluation point has wrong dimension");
  PowerTable<Rational> powers(point);
  Rational sum;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) term *= powers.get(i, e[i]);
    }
    sum += term;
  }
  return sum;
}

std::complex<double> MultiPoly::eval(std::span<const std::complex<double>> point) const {
  if (point.size() != nvars()) throw DimensionMismatch("evaluation point has wrong dimension");
  std::complex<double> sum{};
  for (const auto& [e, c] : terms_) {
    std::complex<double> term = c.to_double();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) term *= power(point[i], e[i]);
    }
    sum += term;
  }
  return sum;
}

MultiPoly MultiPoly::substitute(std::size_t var, const Rational& value) const {
  if (var >= nvars()) throw UnknownVariable("variable index out of range");
  std::vector<std::string> rest = vars_;
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(var));
  MultiPoly out(rest);
  for (const auto& [e, c] : terms_) {
    Exponent d = e;
    d.erase(d.begin() + static_cast<std::ptrdiff_t>(var));
    out.add_term(d, c * value.pow(e[var]));
  }
  return out;
}

MultiPoly MultiPoly::compose(std::size_t var, const MultiPoly& replacement) const {
  if (var >= nvars()) throw UnknownVariable("variable index out of range");
  std::vector<std::string> rest = vars_;
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(var));
  const MultiPoly r = replacement.with_variables(rest);
  std::vector<MultiPoly> powers{constant(rest, Rational(1))};
  MultiPoly out(rest);
  for (const auto& [e, c] : terms_) {
    while (powers.size() <= e[var]) powers.push_back(powers.back() * r);
    Exponent d = e;
    d.erase(d.begin() + static_cast<std::ptrdiff_t>(var));
    out += monomial(rest, d, c) * powers[e[var]];
  }
  return out;
}

MultiPoly poly_arith(const MultiPoly& p, const MultiPoly& q, PolyOp op) {
  switch (op) {
    case PolyOp::add:
      return p + q;
    case PolyOp::sub:
      return p - q;
    case PolyOp::mul:
      return p * q;
  }
  return p;
}

DivisionResult divide(const MultiPoly& p, const MultiPoly& f) {
  if (f.is_zero()) throw ZeroDivisor("division by the zero polynomial");
  MultiPoly work = p;
  MultiPoly divisor = f;
  {
    const auto merged = merge_variables(work.vars(), divisor.vars());
    work = work.with_variables(merged);
    divisor = divisor.with_variables(merged);
  }
  const auto& lead = *divisor.terms().begin();
  MultiPoly quotient(work.vars());
  MultiPoly remainder(work.vars());
  while (!work.is_zero()) {
    const auto [e, c] = *work.terms().begin();
    bool divisible = true;
    Exponent shift(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < lead.first[i]) {
        divisible = false;
        break;
      }
      shift[i] = e[i] - lead.first[i];
    }
    if (divisible) {
      const Rational factor = c / lead.second;
      const MultiPoly t = MultiPoly::monomial(work.vars(), shift, factor);
      quotient += t;
      work -= t * divisor;
    } else {
      remainder.add_term(e, c);
      work.add_term(e, -c);
    }
  }
  return {std::move(quotient), std::move(remainder)};
}

std::optional<MultiPoly> exact_divide(const MultiPoly& p, const MultiPoly& f) {
  auto result = divide(p, f);
  if (!result.remainder.is_zero()) return std::nullopt;
  return std::move(result.quotient);
}

}  // namespace resilog
