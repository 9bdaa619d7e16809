#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "resilog/birational.hpp"
#include "resilog/error.hpp"
#include "resilog/global.hpp"
#include "resilog/problem_io.hpp"

namespace resilog::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "resilog/1";

// Exact values are "p/q" strings, approximate ones {re, im, err}; absent is null.
Json value_json(const Value& v);
Json value_json(const std::optional<Value>& v);
Json rational_vector_json(const std::vector<Rational>& v);

Json point_json(const SingularPoint& p, std::size_t n);
Json record_json(const ResidueRecord& r, std::size_t n);
Json problem_json(const ProblemFile& file);
Json chart_json(const ChartField& cf);

Json check_json(const ProblemFile& file, const std::vector<ChartField>& charts);
Json not_tangent_json(const ProblemFile& file, const NotTangent& e);
Json zeros_json(const ProblemFile& file, const SingularSet& set, Enumeration::Mode mode);
Json residues_json(const ProblemFile& file, const SingularSet& set, Enumeration::Mode mode,
                   const GlobalReport& report);
Json verify_json(const ProblemFile& file, const SingularSet& set, Enumeration::Mode mode,
                 const GlobalReport& report);
Json poincare_json(const ProblemFile& file, const SingularSet& set, Enumeration::Mode mode,
                   const PoincareVerdict& v);
Json surface_json(const ProblemFile& file, const SingularSet& set, Enumeration::Mode mode,
                  const SurfaceReport& s);
Json discrepancy_json(const DiscrepancyProblem& p, const DiscrepancyResult& r);
Json cyclic_json(const CyclicQuotientModel& model);
Json error_json(const std::string& command, const std::exception& e);

// Starts every document: {"schema": ..., "command": ...}.
Json document(const std::string& command);

std::string render_machine(const Json& doc);
// Human-readable rendering of any document produced above.
std::string render_table(const Json& doc);

}  // namespace resilog::cli
