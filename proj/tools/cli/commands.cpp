#include "commands.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "report.hpp"
#include "resilog/error.hpp"

namespace resilog::cli {

namespace {

struct Options {
  std::string format = "table";
  std::string input;
  std::string points_file;
  std::string i_selection = "all";
  bool numeric = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> newton_tol;
  std::optional<int> newton_max_iter;
  std::optional<double> dedupe_radius;
  std::optional<double> search_radius;
  std::string eps_levels;
  std::optional<int> grid_per_axis;
  std::string box;
  std::optional<int> grid;
  unsigned m = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw UsageError("invalid number '" + s + "' for " + what);
  }
}

std::vector<std::size_t> parse_i_list(const std::string& selection, std::size_t n) {
  std::vector<std::size_t> out;
  if (selection == "all") {
    for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  for (const auto& item : split(selection, ',')) {
    if (item.empty() || !std::all_of(item.begin(), item.end(), ::isdigit)) {
      throw UsageError("--i expects 'all' or a comma-separated list of integers");
    }
    const auto i = static_cast<std::size_t>(std::stoul(item));
    if (i >= n) throw UsageError("--i value " + item + " is out of range 0.." + std::to_string(n - 1));
    out.push_back(i);
  }
  return out;
}

void add_problem_options(CLI::App* sub, Options& o) {
  sub->add_option("problem", o.input, "Problem file")->required();
  sub->add_option("--points", o.points_file, "Point list file (overrides the problem's points)");
  sub->add_flag("--numeric", o.numeric, "Discover zeros by multi-start Newton");
  sub->add_option("--box", o.box, "Numeric search box LO,HI[,IMAG]");
  sub->add_option("--grid", o.grid, "Numeric search starts per axis");
  sub->add_option("--seed", o.seed, "Random seed");
  sub->add_option("--newton-tol", o.newton_tol, "Newton residual tolerance");
  sub->add_option("--newton-max-iter", o.newton_max_iter, "Newton iteration cap");
  sub->add_option("--dedupe-radius", o.dedupe_radius, "Root merge radius");
  sub->add_option("--search-radius", o.search_radius, "Perturbation search radius");
  sub->add_option("--eps-levels", o.eps_levels, "Two perturbation sizes, comma-separated");
  sub->add_option("--grid-per-axis", o.grid_per_axis, "Perturbation starts per axis");
}

void apply_overrides(const Options& o, ProblemFile& file) {
  NumericConfig& cfg = file.numeric;
  if (o.seed) cfg.seed = *o.seed;
  if (o.newton_tol) cfg.newton_tol = *o.newton_tol;
  if (o.newton_max_iter) cfg.newton_max_iter = *o.newton_max_iter;
  if (o.dedupe_radius) cfg.dedupe_radius = *o.dedupe_radius;
  if (o.search_radius) cfg.search_radius = *o.search_radius;
  if (o.grid_per_axis) cfg.grid_per_axis = *o.grid_per_axis;
  if (!o.eps_levels.empty()) {
    cfg.eps_levels.clear();
    for (const auto& e : split(o.eps_levels, ',')) cfg.eps_levels.push_back(to_number(e, "--eps-levels"));
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!o.box.empty()) {
    const auto parts = split(o.box, ',');
    if (parts.size() != 2 && parts.size() != 3) throw UsageError("--box expects LO,HI[,IMAG]");
    file.search.lo = to_number(parts[0], "--box");
    file.search.hi = to_number(parts[1], "--box");
    if (parts.size() == 3) file.search.imag = to_number(parts[2], "--box");
    if (file.search.lo >= file.search.hi || file.search.imag < 0) {
      throw UsageError("--box needs LO < HI and IMAG >= 0");
    }
  }
  if (o.grid) {
    if (*o.grid < 1) throw UsageError("--grid must be positive");
    file.search.grid = *o.grid;
  }
}

Enumeration enumeration_for(const Options& o, const ProblemFile& file) {
  Enumeration e;
  e.search.cfg = file.numeric;
  e.search.lo = file.search.lo;
  e.search.hi = file.search.hi;
  e.search.imag = file.search.imag;
  e.search.grid = file.search.grid;
  if (o.numeric) {
    e.mode = Enumeration::Mode::numeric;
  } else if (!o.points_file.empty()) {
    const PointList list = parse_points(read_file(o.points_file), file.problem.n);
    e.mode = Enumeration::Mode::user;
    e.user = list.points;
    e.user_attests_complete = list.complete;
  } else if (file.has_points) {
    e.mode = Enumeration::Mode::user;
    e.user = file.points;
    e.user_attests_complete = file.points_complete;
  } else {
    e.mode = Enumeration::Mode::exact_linear;
  }
  return e;
}

struct Outcome {
  Json doc;
  int code = kSuccess;
};

ProblemFile load(const Options& o) {
  ProblemFile file = parse_problem(read_file(o.input));
  apply_overrides(o, file);
  return file;
}

Outcome cmd_check(const Options& o) {
  const ProblemFile file = load(o);
  try {
    return {check_json(file, verify_tangency(file.problem)), kSuccess};
  } catch (const NotTangent& e) {
    return {not_tangent_json(file, e), kRejected};
  }
}

Outcome cmd_zeros(const Options& o) {
  const ProblemFile file = load(o);
  const Enumeration e = enumeration_for(o, file);
  const SingularSet set = enumerate_singularities(file.problem, e);
  return {zeros_json(file, set, e.mode), kSuccess};
}

Outcome cmd_residues(const Options& o, bool verify) {
  const ProblemFile file = load(o);
  const auto is = parse_i_list(o.i_selection, file.problem.n);
  const Enumeration e = enumeration_for(o, file);
  const SingularSet set = enumerate_singularities(file.problem, e);
  const GlobalReport report = verify_identities(file.problem, set, is, file.numeric);
  if (!verify) return {residues_json(file, set, e.mode, report), kSuccess};
  return {verify_json(file, set, e.mode, report), report.all_hold() ? kSuccess : kIdentityFailed};
}

Outcome cmd_poincare(const Options& o) {
  const ProblemFile file = load(o);
  const Enumeration e = enumeration_for(o, file);
  const SingularSet set = enumerate_singularities(file.problem, e);
  return {poincare_json(file, set, e.mode, poincare_check(file.problem, set, file.numeric)),
          kSuccess};
}

Outcome cmd_surface(const Options& o) {
  const ProblemFile file = load(o);
  if (file.problem.n != 2) throw NotSupported("the surface report needs n = 2");
  const Enumeration e = enumeration_for(o, file);
  const SingularSet set = enumerate_singularities(file.problem, e);
  return {surface_json(file, set, e.mode, surface_report(file.problem, set, file.numeric)),
          kSuccess};
}

Outcome cmd_discrepancy(const Options& o) {
  const DiscrepancyProblem p = parse_discrepancy(read_file(o.input));
  return {discrepancy_json(p, solve_discrepancies(p)), kSuccess};
}

Outcome cmd_cyclic(const Options& o) { return {cyclic_json(cyclic_quotient_model(o.m)), kSuccess}; }

// Input problems (syntax, schema, shape) are usage errors; everything the
// mathematics refuses is a rejection.
int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const InvalidProblem*>(&e) ||
      dynamic_cast<const UnknownVariable*>(&e) || dynamic_cast<const DimensionMismatch*>(&e)) {
    return kUsageError;
  }
  if (dynamic_cast<const Error*>(&e)) return kRejected;
  return kUsageError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact residues of foliations tangent to a divisor"};
  app.name("resilog");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"table", "machine"}));

  auto* check = app.add_subcommand("check", "Verify tangency and print chart cofactors");
  add_problem_options(check, o);
  auto* zeros = app.add_subcommand("zeros", "Enumerate singular points");
  add_problem_options(zeros, o);
  auto* residues = app.add_subcommand("residues", "Local residues at every singular point");
  add_problem_options(residues, o);
  residues->add_option("--i", o.i_selection, "Residue indices: list or 'all'");
  auto* verify = app.add_subcommand("verify", "Check the global residue identities");
  add_problem_options(verify, o);
  verify->add_option("--i", o.i_selection, "Residue indices: list or 'all'");
  auto* poincare = app.add_subcommand("poincare", "Poincare-type degree bound");
  add_problem_options(poincare, o);
  auto* surface = app.add_subcommand("surface", "GSV and Camacho-Sad report on P^2");
  add_problem_options(surface, o);
  auto* discrepancy = app.add_subcommand("discrepancy", "Log discrepancies from residues");
  discrepancy->add_option("matrix", o.input, "Matrix document")->required();
  auto* cyclic = app.add_subcommand("cyclic", "Built-in cyclic quotient model");
  cyclic->add_option("--m", o.m, "Order of the cyclic group")->required()->check(CLI::Range(2U, 100000U));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out;
    std::ostringstream help_err;
    const int code = app.exit(e, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? kSuccess : kUsageError;
  }

  const bool machine = o.format == "machine";
  std::string command = app.get_subcommands().front()->get_name();
  Outcome outcome;
  try {
    if (command == "check") {
      outcome = cmd_check(o);
    } else if (command == "zeros") {
      outcome = cmd_zeros(o);
    } else if (command == "residues") {
      outcome = cmd_residues(o, false);
    } else if (command == "verify") {
      outcome = cmd_residues(o, true);
    } else if (command == "poincare") {
      outcome = cmd_poincare(o);
    } else if (command == "surface") {
      outcome = cmd_surface(o);
    } else if (command == "discrepancy") {
      outcome = cmd_discrepancy(o);
    } else {
      outcome = cmd_cyclic(o);
    }
  } catch (const std::exception& e) {
    const Json doc = error_json(command, e);
    if (machine) {
      out << render_machine(doc);
    } else {
      err << render_table(doc);
    }
    return exit_code_for(e);
  }
  out << (machine ? render_machine(outcome.doc) : render_table(outcome.doc));
  return outcome.code;
}

}  // namespace resilog::cli
