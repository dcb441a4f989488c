#pragma once

#include <string>

#include "moo/front.hpp"
#include "moo/ordered_json.hpp"
#include "moo/scalar.hpp"

namespace moo {

enum class ExportFormat { json, csv };

ExportFormat parse_export_format(const std::string& text);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// JSON: {problem, method, eps, refinement_version, points, created_at, ...}
/// with points as {x, g, lambda?, direction?, boundary_kind, ...}.
/// CSV: x_1..x_D, g_1..g_M, lambda, boundary_kind.
std::string export_front(const Front& front, ExportFormat format);
Json front_to_json(const Front& front);
Front front_from_json(const Json& doc);
Front import_front(const std::string& json_text);

Json solution_to_json(const ScalarSolution& solution, const ProblemDefinition& problem);
Json utopia_to_json(const UtopiaPoint& u, const ProblemDefinition& problem);
Json goal_to_json(const GoalSpec& goal);
GoalSpec goal_from_json(const Json& doc);

Json grid_to_json(const GridSpec& grid);
/// Accepts per-dimension counts ([6, 6]), a list of axis objects, or
/// {"axes": [...]}. Axis objects: {"values": [...]}, {"linear": [lo, hi, n]},
/// {"log": [lo, hi, n], "zero": bool}, {"range": [lo, hi, step]}.
GridSpec grid_from_json(const Json& doc, const ProblemDefinition& problem);

}  // namespace moo
