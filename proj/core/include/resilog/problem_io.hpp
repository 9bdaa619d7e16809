#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resilog/birational.hpp"
#include "resilog/foliation.hpp"
#include "resilog/numeric.hpp"
#include "resilog/parse.hpp"
#include "resilog/residue.hpp"

namespace resilog {

// Numeric search box for zero discovery; `[search]` block.
struct SearchBox {
  double lo = -2.0;
  double hi = 2.0;
  double imag = 0.0;
  int grid = 9;
};

// A problem document:
//
//   name = "optional label"
//   space.dim = <n>
//   field.vars = [z0, ..., zn]
//   field.components = ["<poly>", ...]        # n + 1 entries
//   divisor = "<poly>"
//   points = [{chart = <c>, coords = [<coord>, ...]}, ...]   # optional
//   points_complete = true                    # optional, default true
//   [numeric]                                 # optional NumericConfig keys
//   [search]                                  # optional lo, hi, imag, grid
//
// A coordinate is an integer, a "p/q" string, a decimal number (approximate)
// or an inline table {re = <x>, im = <y>} (approximate).
struct ProblemFile {
  std::string name;
  FoliationProblem problem;
  std::vector<SingularPoint> points;
  bool has_points = false;
  bool points_complete = true;
  NumericConfig numeric;
  SearchBox search;
};

// Throws ParseError, SchemaError, InvalidProblem.
ProblemFile parse_problem(std::string_view src);

// A standalone point list (`points` and optional `points_complete`) for a
// problem on P^n.
struct PointList {
  std::vector<SingularPoint> points;
  bool complete = true;
};
PointList parse_points(std::string_view src, std::size_t n);

// Intersection matrix document:
//
//   M = [[-2, 1], [1, -2]]      # nested rows, or flat with r = <size>
//   I = ["1", "1"]              # integers or "p/q" strings
//   g = [0, 0]                  # optional genera
DiscrepancyProblem parse_discrepancy(std::string_view src);

// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace resilog
