#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "resilog/error.hpp"
#include "resilog/parse.hpp"

namespace resilog::cli {

namespace {

Json strings(const std::vector<std::string>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(s);
  return out;
}

Json approx_json(Complex value, double err) {
  Json out;
  out["re"] = value.real();
  out["im"] = value.imag();
  out["err"] = err;
  return out;
}

Json polys(const std::vector<MultiPoly>& v) {
  Json out = Json::array();
  for (const auto& p : v) out.push_back(print_poly(p));
  return out;
}

Json points_json(const std::vector<SingularPoint>& points, std::size_t n) {
  Json out = Json::array();
  for (const auto& p : points) out.push_back(point_json(p, n));
  return out;
}

Json set_json(const SingularSet& set, Enumeration::Mode mode, std::size_t n) {
  Json out;
  out["mode"] = to_string(mode);
  out["complete"] = set.complete;
  out["count"] = set.points.size();
  out["points"] = points_json(set.points, n);
  return out;
}

Json records_json(const GlobalReport& report) {
  Json out = Json::array();
  for (const auto& r : report.records) out.push_back(record_json(r, report.n));
  return out;
}

Json notes_json(const std::vector<std::string>& a, const std::vector<std::string>& b = {}) {
  Json out = Json::array();
  for (const auto& s : a) out.push_back(s);
  for (const auto& s : b) out.push_back(s);
  return out;
}

}  // namespace

Json document(const std::string& command) {
  Json out;
  out["schema"] = kSchema;
  out["command"] = command;
  return out;
}

Json value_json(const Value& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return r->str();
  const auto& a = std::get<Approx>(v);
  return approx_json(a.value, a.error);
}

Json value_json(const std::optional<Value>& v) { return v ? value_json(*v) : Json(nullptr); }

Json rational_vector_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

Json point_json(const SingularPoint& p, std::size_t n) {
  Json out;
  out["chart"] = p.chart;
  out["exact"] = p.is_exact();
  Json hom = Json::array();
  Json coords = Json::array();
  if (p.is_exact()) {
    for (const auto& z : homogeneous_exact(p, n)) hom.push_back(z.str());
    for (const auto& x : p.exact_coords) coords.push_back(x.str());
  } else {
    for (const auto& z : homogeneous_approx(p, n)) hom.push_back(approx_json(z, p.error_bound));
    for (const auto& x : p.coords) coords.push_back(approx_json(x, p.error_bound));
  }
  out["homogeneous"] = hom;
  out["coords"] = coords;
  out["on_divisor"] = p.on_divisor;
  out["divisor_singular"] = p.divisor_singular;
  out["simple"] = p.simple;
  out["simple_on_divisor"] = p.simple_on_divisor;
  out["adapted_index"] = p.adapted_index ? Json(*p.adapted_index) : Json(nullptr);
  return out;
}

Json record_json(const ResidueRecord& r, std::size_t n) {
  Json out;
  out["i"] = r.i;
  out["point"] = point_json(r.point, n);
  out["ordinary"] = value_json(r.ordinary);
  out["log"] = value_json(r.log);
  out["var"] = value_json(r.var);
  out["method"] = to_string(r.method);
  out["notes"] = strings(r.notes);
  return out;
}

Json problem_json(const ProblemFile& file) {
  const auto& p = file.problem;
  Json out;
  if (!file.name.empty()) out["name"] = file.name;
  out["n"] = p.n;
  out["d"] = p.d;
  out["m"] = p.m;
  out["vars"] = strings(p.vars);
  out["field"] = polys(p.field);
  out["divisor"] = print_poly(p.divisor);
  out["warnings"] = strings(p.warnings);
  return out;
}

Json chart_json(const ChartField& cf) {
  Json out;
  out["chart"] = cf.chart;
  out["vars"] = strings(cf.vars);
  out["field"] = polys(cf.a);
  out["divisor"] = print_poly(cf.f);
  out["cofactor"] = print_poly(cf.k);
  return out;
}

Json check_json(const ProblemFile& file, const std::vector<ChartField>& charts) {
  Json out = document("check");
  out["problem"] = problem_json(file);
  out["tangent"] = true;
  Json cs = Json::array();
  for (const auto& cf : charts) cs.push_back(chart_json(cf));
  out["charts"] = cs;
  return out;
}

Json not_tangent_json(const ProblemFile& file, const NotTangent& e) {
  Json out = document("check");
  out["problem"] = problem_json(file);
  out["tangent"] = false;
  out["chart"] = e.chart();
  out["remainder"] = e.remainder();
  out["error"] = {{"code", e.code()}, {"message", e.what()}};
  return out;
}

Json zeros_json(const ProblemFile& file, const SingularSet& set, Enumeration::Mode mode) {
  Json out = document("zeros");
  out["problem"] = problem_json(file);
  out["zeros"] = set_json(set, mode, file.problem.n);
  out["notes"] = notes_json(set.notes);
  return out;
}

Json residues_json(const ProblemFile& file, const SingularSet& set, Enumeration::Mode mode,
                   const GlobalReport& report) {
  Json out = document("residues");
  out["problem"] = problem_json(file);
  out["zeros"] = set_json(set, mode, file.problem.n);
  Json is = Json::array();
  for (const auto& row : report.rows) is.push_back(row.i);
  out["i"] = is;
  out["records"] = records_json(report);
  out["notes"] = notes_json(report.notes);
  return out;
}

Json verify_json(const ProblemFile& file, const SingularSet& set, Enumeration::Mode mode,
                 const GlobalReport& report) {
  Json out = document("verify");
  out["problem"] = problem_json(file);
  out["zeros"] = set_json(set, mode, file.problem.n);
  out["certification"] = to_string(report.level);
  out["all_hold"] = report.all_hold();
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json r;
    r["i"] = row.i;
    r["ordinary"] = {{"total", value_json(row.ordinary_total)},
                     {"expected", row.expected_ordinary.str()},
                     {"gap", value_json(row.ordinary_gap)}};
    r["log"] = {{"total", value_json(row.log_total)},
                {"expected", row.expected_log.str()},
                {"gap", value_json(row.log_gap)}};
    r["var"] = {{"total", value_json(row.var_total)},
                {"expected", row.expected_var.str()},
                {"gap", value_json(row.var_gap)}};
    r["exact"] = row.exact;
    r["holds"] = row.holds;
    rows.push_back(r);
  }
  out["identities"] = rows;
  out["records"] = records_json(report);
  out["notes"] = notes_json(report.notes);
  return out;
}

Json poincare_json(const ProblemFile& file, const SingularSet& set, Enumeration::Mode mode,
                   const PoincareVerdict& v) {
  Json out = document("poincare");
  out["problem"] = problem_json(file);
  out["zeros"] = set_json(set, mode, file.problem.n);
  out["i_used"] = v.i_used;
  out["total_log_residue"] = value_json(v.total_log_residue);
  out["total_nonnegative"] = v.total_nonnegative;
  out["all_local_nonnegative"] = v.all_local_nonnegative;
  out["bound"] = "m <= d + n: " + std::to_string(v.m) + " <= " + std::to_string(v.d + v.n);
  out["bound_asserted"] = v.bound_asserted;
  out["bound_holds"] = v.bound_holds;
  out["equality"] = v.equality;
  out["certification"] = to_string(v.level);
  out["notes"] = notes_json(v.notes);
  return out;
}

Json surface_json(const ProblemFile& file, const SingularSet& set, Enumeration::Mode mode,
                  const SurfaceReport& s) {
  Json out = document("surface");
  out["problem"] = problem_json(file);
  out["zeros"] = set_json(set, mode, file.problem.n);
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    Json row;
    row["point"] = point_json(r.point, 2);
    row["gsv"] = value_json(r.gsv);
    row["cs"] = value_json(r.cs);
    row["ordinary"] = value_json(r.ordinary);
    row["method"] = to_string(r.method);
    rows.push_back(row);
  }
  out["points"] = rows;
  out["gsv_total"] = value_json(s.gsv_total);
  out["cs_total"] = value_json(s.cs_total);
  out["expected_gsv"] = s.expected_gsv.str();
  out["expected_cs"] = s.expected_cs.str();
  out["totals_match"] = s.totals_match;
  out["all_gsv_nonnegative"] = s.all_gsv_nonnegative;
  out["bound"] = "m <= d + 2: " + std::to_string(s.m) + " <= " + std::to_string(s.d + 2);
  out["bound_asserted"] = s.bound_asserted;
  out["equality_flag"] = s.equality_flag;
  out["certification"] = to_string(s.level);
  out["notes"] = notes_json(s.notes);
  return out;
}

Json discrepancy_json(const DiscrepancyProblem& p, const DiscrepancyResult& r) {
  Json out = document("discrepancy");
  Json M = Json::array();
  for (std::size_t i = 0; i < p.M.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < p.M.cols(); ++j) row.push_back(p.M(i, j).str());
    M.push_back(row);
  }
  out["M"] = M;
  out["I"] = rational_vector_json(p.I);
  out["g"] = p.g;
  out["leading_minors"] = rational_vector_json(r.definiteness.minors);
  out["negative_definite"] = r.definiteness.negative_definite;
  out["b"] = rational_vector_json(r.b);
  out["a"] = rational_vector_json(r.a);
  out["classification"] = to_string(r.classification);
  out["reconstructed_I"] = rational_vector_json(r.reconstructed_I);
  out["round_trip"] = r.round_trip;
  out["adjunction_I"] = rational_vector_json(r.adjunction_I);
  out["matches_adjunction"] = r.matches_adjunction;
  out["notes"] = Json::array(
      {"hypotheses on the lifted foliation (no divisorial zeroes, isolated logarithmic zeroes) "
       "are attested by the input and not checked"});
  return out;
}

Json cyclic_json(const CyclicQuotientModel& model) {
  Json out = document("cyclic");
  out["m"] = model.m;
  Json charts = Json::array();
  for (const auto& cf : model.charts) charts.push_back(chart_json(cf));
  out["charts"] = charts;
  Json residues = Json::array();
  for (const auto& r : model.residues) {
    Json row;
    row["chart"] = r.point.chart;
    row["coords"] = rational_vector_json(r.point.exact_coords);
    row["log"] = value_json(r.log);
    residues.push_back(row);
  }
  out["residues"] = residues;
  out["I_E"] = model.I_E.str();
  out["M"] = Json::array({Json::array({model.M(0, 0).str()})});
  out["b"] = rational_vector_json(model.result.b);
  out["a"] = rational_vector_json(model.result.a);
  out["classification"] = to_string(model.result.classification);
  out["round_trip"] = model.result.round_trip;
  out["matches_adjunction"] = model.result.matches_adjunction;
  return out;
}

Json error_json(const std::string& command, const std::exception& e) {
  Json out = document(command);
  Json err;
  if (const auto* re = dynamic_cast<const Error*>(&e)) {
    err["code"] = re->code();
  } else {
    err["code"] = "Error";
  }
  err["message"] = e.what();
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    err["line"] = pe->line();
    err["column"] = pe->column();
    err["snippet"] = pe->snippet();
  }
  out["error"] = err;
  return out;
}

std::string render_machine(const Json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Table rendering

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", std::abs(x) < 5e-13 ? 0.0 : x);
  return buf;
}

std::string value_text(const Json& v) {
  if (v.is_null()) return "n/a";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_object() && v.contains("re")) {
    const double re = v["re"].get<double>();
    const double im = v["im"].get<double>();
    const double err = v["err"].get<double>();
    char buf[128];
    if (std::abs(im) <= std::max(err, 1e-12)) {
      std::snprintf(buf, sizeof buf, "%s±%.2g", fmt_double(re).c_str(), err);
    } else {
      std::snprintf(buf, sizeof buf, "(%s%+.12gi)±%.2g", fmt_double(re).c_str(), im, err);
    }
    return buf;
  }
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  return v.dump();
}

std::string coord_text(const Json& c) {
  if (c.is_string()) return c.get<std::string>();
  const double re = c["re"].get<double>();
  const double im = c["im"].get<double>();
  if (std::abs(im) < 1e-12) return fmt_double(re);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s%+.12gi", fmt_double(re).c_str(), im);
  return buf;
}

std::string point_text(const Json& p) {
  std::string out = "[";
  bool first = true;
  for (const auto& z : p["homogeneous"]) {
    if (!first) out += ":";
    out += coord_text(z);
    first = false;
  }
  return out + "]";
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& os, const std::string& indent = "  ") const {
    std::vector<std::size_t> widths;
    for (const auto& r : rows_) {
      if (widths.size() < r.size()) widths.resize(r.size(), 0);
      for (std::size_t c = 0; c < r.size(); ++c) widths[c] = std::max(widths[c], display_width(r[c]));
    }
    for (const auto& r : rows_) {
      std::string line = indent;
      for (std::size_t c = 0; c < r.size(); ++c) {
        line += r[c];
        if (c + 1 < r.size()) line += std::string(widths[c] - display_width(r[c]) + 2, ' ');
      }
      line.erase(line.find_last_not_of(' ') + 1);
      os << line << "\n";
    }
  }

 private:
  // Counts UTF-8 code points so that "±" occupies one column.
  static std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (const unsigned char c : s) {
      if ((c & 0xC0) != 0x80) ++w;
    }
    return w;
  }

  std::vector<std::vector<std::string>> rows_;
};

void print_problem(std::ostream& os, const Json& p) {
  if (p.contains("name")) os << p["name"].get<std::string>() << "\n";
  os << "P^" << p["n"] << "  d = " << p["d"] << "  m = " << p["m"] << "\n";
  os << "field    (";
  bool first = true;
  for (const auto& c : p["field"]) {
    if (!first) os << ", ";
    os << c.get<std::string>();
    first = false;
  }
  os << ")\n";
  os << "divisor  " << p["divisor"].get<std::string>() << "\n";
  for (const auto& w : p["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
}

void print_zeros(std::ostream& os, const Json& z) {
  os << "\nzeros (" << z["count"] << ", mode " << z["mode"].get<std::string>() << ", "
     << (z["complete"].get<bool>() ? "complete" : "not certified complete") << ")\n";
  Table t({"point", "chart", "on D", "simple", "simple on D", "s"});
  for (const auto& p : z["points"]) {
    std::string on = p["on_divisor"].get<bool>() ? "yes" : "no";
    if (p["divisor_singular"].get<bool>()) on = "singular";
    t.add({point_text(p), std::to_string(p["chart"].get<std::size_t>()), on,
           value_text(p["simple"]), p["on_divisor"].get<bool>() ? value_text(p["simple_on_divisor"]) : "-",
           p["adapted_index"].is_null() ? "-" : std::to_string(p["adapted_index"].get<std::size_t>())});
  }
  t.print(os);
}

void print_notes(std::ostream& os, const Json& doc) {
  if (!doc.contains("notes") || doc["notes"].empty()) return;
  os << "\nnotes\n";
  for (const auto& n : doc["notes"]) os << "  " << n.get<std::string>() << "\n";
}

void print_records(std::ostream& os, const Json& records, std::size_t i) {
  Table t({"point", "ordinary", "log", "var", "method"});
  for (const auto& r : records) {
    if (r["i"].get<std::size_t>() != i) continue;
    t.add({point_text(r["point"]), value_text(r["ordinary"]), value_text(r["log"]),
           value_text(r["var"]), r["method"].get<std::string>()});
  }
  t.print(os);
}

void render_check(std::ostream& os, const Json& doc) {
  print_problem(os, doc["problem"]);
  if (!doc["tangent"].get<bool>()) {
    os << "\nnot tangent: in chart " << doc["chart"] << " v(f) leaves remainder "
       << doc["remainder"].get<std::string>() << "\n";
    return;
  }
  os << "\ntangent in every chart\n";
  Table t({"chart", "f", "cofactor k"});
  for (const auto& c : doc["charts"]) {
    t.add({std::to_string(c["chart"].get<std::size_t>()), c["divisor"].get<std::string>(),
           c["cofactor"].get<std::string>()});
  }
  t.print(os);
}

void render_verify(std::ostream& os, const Json& doc) {
  print_problem(os, doc["problem"]);
  print_zeros(os, doc["zeros"]);
  for (const auto& row : doc["identities"]) {
    const auto i = row["i"].get<std::size_t>();
    os << "\ni = " << i << "\n";
    print_records(os, doc["records"], i);
    Table t({"", "ordinary", "log", "var"});
    t.add({"total", value_text(row["ordinary"]["total"]), value_text(row["log"]["total"]),
           value_text(row["var"]["total"])});
    t.add({"expected", value_text(row["ordinary"]["expected"]), value_text(row["log"]["expected"]),
           value_text(row["var"]["expected"])});
    t.add({"gap", value_text(row["ordinary"]["gap"]), value_text(row["log"]["gap"]),
           value_text(row["var"]["gap"])});
    t.print(os);
    os << "  " << (row["holds"].get<bool>() ? "holds" : "FAILS") << "\n";
  }
  os << "\ncertification: " << doc["certification"].get<std::string>() << "\n";
  print_notes(os, doc);
}

void render_residues(std::ostream& os, const Json& doc) {
  print_problem(os, doc["problem"]);
  print_zeros(os, doc["zeros"]);
  for (const auto& i : doc["i"]) {
    os << "\ni = " << i << "\n";
    print_records(os, doc["records"], i.get<std::size_t>());
  }
  print_notes(os, doc);
}

void render_poincare(std::ostream& os, const Json& doc) {
  print_problem(os, doc["problem"]);
  print_zeros(os, doc["zeros"]);
  os << "\ni used            " << doc["i_used"] << "\n";
  os << "total log residue " << value_text(doc["total_log_residue"]) << "\n";
  os << "bound             " << doc["bound"].get<std::string>() << "  "
     << (doc["bound_asserted"].get<bool>() ? "asserted" : "not asserted") << "\n";
  if (doc["equality"].get<bool>()) os << "equality          m = d + n\n";
  os << "certification     " << doc["certification"].get<std::string>() << "\n";
  print_notes(os, doc);
}

void render_surface(std::ostream& os, const Json& doc) {
  print_problem(os, doc["problem"]);
  print_zeros(os, doc["zeros"]);
  os << "\n";
  Table t({"point", "GSV", "CS", "GSV + CS", "method"});
  for (const auto& r : doc["points"]) {
    t.add({point_text(r["point"]), value_text(r["gsv"]), value_text(r["cs"]),
           value_text(r["ordinary"]), r["method"].get<std::string>()});
  }
  t.add({"total", value_text(doc["gsv_total"]), value_text(doc["cs_total"]), "", ""});
  t.add({"expected", value_text(doc["expected_gsv"]), value_text(doc["expected_cs"]), "", ""});
  t.print(os);
  os << "\nbound " << doc["bound"].get<std::string>() << "  "
     << (doc["bound_asserted"].get<bool>() ? "asserted" : "not asserted") << "\n";
  if (doc["equality_flag"].get<bool>()) os << "equality case flagged\n";
  os << "certification " << doc["certification"].get<std::string>() << "\n";
  print_notes(os, doc);
}

std::string vector_text(const Json& v) {
  std::string out = "(";
  bool first = true;
  for (const auto& x : v) {
    if (!first) out += ", ";
    out += value_text(x);
    first = false;
  }
  return out + ")";
}

void render_discrepancy(std::ostream& os, const Json& doc) {
  os << "M\n";
  for (const auto& row : doc["M"]) os << "  " << vector_text(row) << "\n";
  os << "I                  " << vector_text(doc["I"]) << "\n";
  os << "leading minors     " << vector_text(doc["leading_minors"]) << "\n";
  os << "negative definite  " << value_text(doc["negative_definite"]) << "\n";
  os << "b                  " << vector_text(doc["b"]) << "\n";
  os << "a                  " << vector_text(doc["a"]) << "\n";
  os << "classification     " << doc["classification"].get<std::string>() << "\n";
  os << "-M b               " << vector_text(doc["reconstructed_I"]) << "  "
     << (doc["round_trip"].get<bool>() ? "matches I" : "MISMATCH") << "\n";
  os << "adjunction I       " << vector_text(doc["adjunction_I"]) << "  "
     << (doc["matches_adjunction"].get<bool>() ? "matches I" : "differs from I") << "\n";
  print_notes(os, doc);
}

void render_cyclic(std::ostream& os, const Json& doc) {
  os << "cyclic quotient, m = " << doc["m"] << "\n\n";
  Table t({"chart", "vars", "field", "E", "cofactor"});
  for (const auto& c : doc["charts"]) {
    t.add({std::to_string(c["chart"].get<std::size_t>()), vector_text(c["vars"]),
           vector_text(c["field"]), c["divisor"].get<std::string>(), c["cofactor"].get<std::string>()});
  }
  t.print(os);
  os << "\n";
  Table r({"chart", "point", "log residue"});
  for (const auto& row : doc["residues"]) {
    r.add({std::to_string(row["chart"].get<std::size_t>()), vector_text(row["coords"]),
           value_text(row["log"])});
  }
  r.print(os);
  os << "\nI_E             " << doc["I_E"].get<std::string>() << "\n";
  os << "M               " << vector_text(doc["M"][0]) << "\n";
  os << "b               " << vector_text(doc["b"]) << "\n";
  os << "a               " << vector_text(doc["a"]) << "\n";
  os << "classification  " << doc["classification"].get<std::string>() << "\n";
}

void render_zeros(std::ostream& os, const Json& doc) {
  print_problem(os, doc["problem"]);
  print_zeros(os, doc["zeros"]);
  print_notes(os, doc);
}

}  // namespace

std::string render_table(const Json& doc) {
  std::ostringstream os;
  const std::string command = doc.value("command", "");
  if (doc.contains("error") && !(command == "check" && doc.contains("tangent"))) {
    const auto& e = doc["error"];
    os << "error [" << e["code"].get<std::string>() << "]: " << e["message"].get<std::string>()
       << "\n";
    if (e.contains("snippet") && !e["snippet"].get<std::string>().empty()) {
      os << "  near '" << e["snippet"].get<std::string>() << "'\n";
    }
    return os.str();
  }
  if (command == "check") {
    render_check(os, doc);
  } else if (command == "zeros") {
    render_zeros(os, doc);
  } else if (command == "residues") {
    render_residues(os, doc);
  } else if (command == "verify") {
    render_verify(os, doc);
  } else if (command == "poincare") {
    render_poincare(os, doc);
  } else if (command == "surface") {
    render_surface(os, doc);
  } else if (command == "discrepancy") {
    render_discrepancy(os, doc);
  } else if (command == "cyclic") {
    render_cyclic(os, doc);
  } else {
    os << doc.dump(2) << "\n";
  }
  return os.str();
}

}  // namespace resilog::cli
