#pragma once

#include <optional>
#include <string>
#include <vector>

#include "moo/core.hpp"
#include "moo/mimo.hpp"
#include "moo/search.hpp"

namespace moo {

struct BuiltinProblem {
  ProblemDefinition problem;
  SearchSpec search;
};

/// Names of the built-in problems, sorted.
std::vector<std::string> builtin_names();

/// params applies to mimo_case_study only.
BuiltinProblem builtin(const std::string& name, const std::optional<mimo::Params>& params = std::nullopt);

/// g(x) = x on the simplex x1 + x2 <= 1, x in [0,1]^2.
ProblemDefinition toy_simplex();
SearchSpec toy_simplex_search();

/// Projection onto a subset of the objectives (kept in the given order).
ProblemDefinition restrict_objectives(const ProblemDefinition& problem, const std::vector<std::size_t>& keep);

}  // namespace moo
