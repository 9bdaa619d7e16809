#include "resilog/problem_io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "resilog/error.hpp"

namespace resilog {

namespace {

std::string at(const SourcePos& pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
}

[[noreturn]] void schema_fail(const SourcePos& pos, const std::string& message) {
  throw SchemaError(at(pos) + message);
}

const DocValue& expect_kind(const DocValue& v, DocValue::Kind kind, std::string_view what) {
  if (v.kind != kind) {
    schema_fail(v.pos, std::string(what) + " must be a " +
                           std::string(DocValue{kind, {}, {}, {}, {}, {}}.kind_name()) +
                           ", found a " + std::string(v.kind_name()));
  }
  return v;
}

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (const char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

Rational to_rational(const DocValue& v, std::string_view what) {
  if (v.kind != DocValue::Kind::string && v.kind != DocValue::Kind::number) {
    schema_fail(v.pos, std::string(what) + " must be an integer or a \"p/q\" string");
  }
  try {
    return Rational::parse(v.text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(v.pos.line, v.pos.column, e.what(), v.text);
  }
}

double to_double(const DocValue& v, std::string_view what) {
  if (v.kind != DocValue::Kind::number) schema_fail(v.pos, std::string(what) + " must be a number");
  if (v.text.find('/') != std::string::npos) return to_rational(v, what).to_double();
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.text.c_str(), &end);
  if (end != v.text.c_str() + v.text.size() || errno == ERANGE) {
    throw ParseError(v.pos.line, v.pos.column, "malformed number", v.text);
  }
  return x;
}

long to_integer(const DocValue& v, std::string_view what) {
  if (v.kind != DocValue::Kind::number || !is_integer_literal(v.text)) {
    schema_fail(v.pos, std::string(what) + " must be an integer");
  }
  errno = 0;
  const long x = std::strtol(v.text.c_str(), nullptr, 10);
  if (errno == ERANGE) schema_fail(v.pos, std::string(what) + " is out of range");
  return x;
}

bool to_bool(const DocValue& v, std::string_view what) {
  if (v.kind == DocValue::Kind::word && (v.text == "true" || v.text == "false")) {
    return v.text == "true";
  }
  schema_fail(v.pos, std::string(what) + " must be true or false");
}

SingularPoint to_point(const DocValue& v, std::size_t n) {
  expect_kind(v, DocValue::Kind::table, "a point");
  for (const auto& [key, value] : v.fields) {
    if (key != "chart" && key != "coords") schema_fail(value.pos, "unknown point field '" + key + "'");
  }
  const DocValue* chart = v.field("chart");
  const DocValue* coords = v.field("coords");
  if (!chart) schema_fail(v.pos, "point is missing 'chart'");
  if (!coords) schema_fail(v.pos, "point is missing 'coords'");
  const long c = to_integer(*chart, "chart");
  if (c < 0 || static_cast<std::size_t>(c) > n) {
    schema_fail(chart->pos, "chart must be in 0.." + std::to_string(n));
  }
  expect_kind(*coords, DocValue::Kind::array, "coords");
  if (coords->items.size() != n) {
    schema_fail(coords->pos, "coords must have " + std::to_string(n) + " entries, found " +
                                 std::to_string(coords->items.size()));
  }
  bool exact = true;
  for (const auto& item : coords->items) {
    if (item.kind == DocValue::Kind::table ||
        (item.kind == DocValue::Kind::number && !is_integer_literal(item.text) &&
         item.text.find('/') == std::string::npos)) {
      exact = false;
    }
  }
  if (exact) {
    std::vector<Rational> values;
    for (const auto& item : coords->items) values.push_back(to_rational(item, "a coordinate"));
    return SingularPoint::exact(static_cast<std::size_t>(c), std::move(values));
  }
  CVector values;
  for (const auto& item : coords->items) {
    if (item.kind == DocValue::Kind::table) {
      const DocValue* re = item.field("re");
      const DocValue* im = item.field("im");
      if (!re) schema_fail(item.pos, "complex coordinate needs 're'");
      values.emplace_back(to_double(*re, "re"), im ? to_double(*im, "im") : 0.0);
    } else if (item.kind == DocValue::Kind::string) {
      values.emplace_back(to_rational(item, "a coordinate").to_double(), 0.0);
    } else {
      values.emplace_back(to_double(item, "a coordinate"), 0.0);
    }
  }
  return SingularPoint::approximate(static_cast<std::size_t>(c), std::move(values), 1e-6);
}

std::vector<SingularPoint> to_points(const DocValue& v, std::size_t n) {
  expect_kind(v, DocValue::Kind::array, "points");
  std::vector<SingularPoint> out;
  for (const auto& item : v.items) out.push_back(to_point(item, n));
  return out;
}

void apply_numeric(const DocEntry& e, NumericConfig& cfg) {
  const std::string key = e.key.substr(std::string("numeric.").size());
  const DocValue& v = e.value;
  if (key == "seed") {
    const long seed = to_integer(v, "seed");
    if (seed < 0) schema_fail(v.pos, "seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  } else if (key == "newton_tol") {
    cfg.newton_tol = to_double(v, key);
  } else if (key == "newton_max_iter") {
    cfg.newton_max_iter = static_cast<int>(to_integer(v, key));
  } else if (key == "dedupe_radius") {
    cfg.dedupe_radius = to_double(v, key);
  } else if (key == "search_radius") {
    cfg.search_radius = to_double(v, key);
  } else if (key == "grid_per_axis") {
    cfg.grid_per_axis = static_cast<int>(to_integer(v, key));
  } else if (key == "eps_levels") {
    expect_kind(v, DocValue::Kind::array, key);
    cfg.eps_levels.clear();
    for (const auto& item : v.items) cfg.eps_levels.push_back(to_double(item, "an eps level"));
  } else {
    schema_fail(e.pos, "unknown numeric key '" + key + "'");
  }
}

void apply_search(const DocEntry& e, SearchBox& box) {
  const std::string key = e.key.substr(std::string("search.").size());
  if (key == "lo") {
    box.lo = to_double(e.value, key);
  } else if (key == "hi") {
    box.hi = to_double(e.value, key);
  } else if (key == "imag") {
    box.imag = to_double(e.value, key);
  } else if (key == "grid") {
    box.grid = static_cast<int>(to_integer(e.value, key));
  } else {
    schema_fail(e.pos, "unknown search key '" + key + "'");
  }
}

bool starts_with(const std::string& s, std::string_view prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

MultiPoly poly_field(const DocValue& v, const std::vector<std::string>& vars, std::string_view what) {
  expect_kind(v, DocValue::Kind::string, what);
  if (v.text.find_first_not_of(" \t") == std::string::npos) {
    throw ParseError(v.content_pos.line, v.content_pos.column, "empty expression", v.text);
  }
  return parse_poly(v.text, vars, v.content_pos);
}

}  // namespace

ProblemFile parse_problem(std::string_view src) {
  const Document doc = parse_document(src);
  ProblemFile out;
  static const std::set<std::string> known{"name",     "description",     "space.dim",
                                           "field.vars", "field.components", "divisor",
                                           "points",   "points_complete"};
  for (const auto& e : doc.entries()) {
    if (starts_with(e.key, "numeric.")) {
      apply_numeric(e, out.numeric);
    } else if (starts_with(e.key, "search.")) {
      apply_search(e, out.search);
    } else if (!known.count(e.key)) {
      schema_fail(e.pos, "unknown key '" + e.key + "'");
    }
  }
  try {
    out.numeric.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("numeric block: ") + e.what());
  }
  if (out.search.grid < 1 || out.search.lo >= out.search.hi || out.search.imag < 0) {
    throw SchemaError("search block: need lo < hi, imag >= 0 and grid >= 1");
  }

  if (const auto* name = doc.find("name")) out.name = expect_kind(name->value, DocValue::Kind::string, "name").text;

  const DocEntry& dim = doc.require("space.dim");
  const long n = to_integer(dim.value, "space.dim");
  if (n < 1) schema_fail(dim.value.pos, "space.dim must be at least 1");

  const DocEntry& vars_entry = doc.require("field.vars");
  expect_kind(vars_entry.value, DocValue::Kind::array, "field.vars");
  std::vector<std::string> vars;
  for (const auto& item : vars_entry.value.items) {
    if (item.kind != DocValue::Kind::word && item.kind != DocValue::Kind::string) {
      schema_fail(item.pos, "variable names must be bare words or strings");
    }
    for (const auto& existing : vars) {
      if (existing == item.text) schema_fail(item.pos, "duplicate variable '" + item.text + "'");
    }
    vars.push_back(item.text);
  }
  if (vars.size() != static_cast<std::size_t>(n) + 1) {
    schema_fail(vars_entry.value.pos, "field.vars must list " + std::to_string(n + 1) +
                                          " variables, found " + std::to_string(vars.size()));
  }

  const DocEntry& comps = doc.require("field.components");
  expect_kind(comps.value, DocValue::Kind::array, "field.components");
  if (comps.value.items.size() != vars.size()) {
    schema_fail(comps.value.pos, "field.components must have " + std::to_string(vars.size()) +
                                     " entries, found " + std::to_string(comps.value.items.size()));
  }
  std::vector<MultiPoly> field;
  for (const auto& item : comps.value.items) field.push_back(poly_field(item, vars, "a field component"));

  const DocEntry& div = doc.require("divisor");
  MultiPoly divisor = poly_field(div.value, vars, "divisor");

  out.problem = make_problem(vars, std::move(field), std::move(divisor));

  if (const auto* pts = doc.find("points")) {
    out.points = to_points(pts->value, out.problem.n);
    out.has_points = true;
  }
  if (const auto* complete = doc.find("points_complete")) {
    out.points_complete = to_bool(complete->value, "points_complete");
  }
  return out;
}

PointList parse_points(std::string_view src, std::size_t n) {
  const Document doc = parse_document(src);
  PointList out;
  for (const auto& e : doc.entries()) {
    if (e.key != "points" && e.key != "points_complete") schema_fail(e.pos, "unknown key '" + e.key + "'");
  }
  out.points = to_points(doc.require("points").value, n);
  if (const auto* complete = doc.find("points_complete")) {
    out.complete = to_bool(complete->value, "points_complete");
  }
  return out;
}

DiscrepancyProblem parse_discrepancy(std::string_view src) {
  const Document doc = parse_document(src);
  for (const auto& e : doc.entries()) {
    if (e.key != "M" && e.key != "I" && e.key != "g" && e.key != "r" && e.key != "name") {
      schema_fail(e.pos, "unknown key '" + e.key + "'");
    }
  }
  const DocEntry& m_entry = doc.require("M");
  const DocValue& mv = expect_kind(m_entry.value, DocValue::Kind::array, "M");
  std::vector<std::vector<Rational>> rows;
  const bool nested = !mv.items.empty() && mv.items.front().kind == DocValue::Kind::array;
  if (nested) {
    for (const auto& row : mv.items) {
      expect_kind(row, DocValue::Kind::array, "a row of M");
      std::vector<Rational> values;
      for (const auto& x : row.items) values.emplace_back(to_integer(x, "an entry of M"));
      rows.push_back(std::move(values));
    }
  } else {
    const DocEntry* r_entry = doc.find("r");
    std::size_t r = 0;
    if (r_entry) {
      const long rv = to_integer(r_entry->value, "r");
      if (rv < 1) schema_fail(r_entry->value.pos, "r must be positive");
      r = static_cast<std::size_t>(rv);
    } else {
      std::size_t side = 0;
      while (side * side < mv.items.size()) ++side;
      r = side;
    }
    if (r * r != mv.items.size()) {
      schema_fail(mv.pos, "flat M must have r*r entries");
    }
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<Rational> values;
      for (std::size_t j = 0; j < r; ++j) values.emplace_back(to_integer(mv.items[i * r + j], "an entry of M"));
      rows.push_back(std::move(values));
    }
  }
  const std::size_t r = rows.size();
  if (r == 0) schema_fail(mv.pos, "M must not be empty");
  for (const auto& row : rows) {
    if (row.size() != r) schema_fail(mv.pos, "M must be square");
  }
  DiscrepancyProblem out;
  out.M = RatMatrix(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) out.M(i, j) = rows[i][j];
  }
  const DocEntry& i_entry = doc.require("I");
  expect_kind(i_entry.value, DocValue::Kind::array, "I");
  if (i_entry.value.items.size() != r) {
    schema_fail(i_entry.value.pos, "I must have " + std::to_string(r) + " entries");
  }
  for (const auto& x : i_entry.value.items) out.I.push_back(to_rational(x, "an entry of I"));
  if (const auto* g = doc.find("g")) {
    expect_kind(g->value, DocValue::Kind::array, "g");
    if (g->value.items.size() != r) schema_fail(g->value.pos, "g must have " + std::to_string(r) + " entries");
    for (const auto& x : g->value.items) {
      const long genus = to_integer(x, "a genus");
      if (genus < 0) schema_fail(x.pos, "genus must be nonnegative");
      out.g.push_back(static_cast<unsigned>(genus));
    }
  } else {
    out.g.assign(r, 0);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace resilog
