#pragma once

#include <functional>
#include <string>
#include <vector>

#include "moo/mimo.hpp"

namespace moo {

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  // Extra lines (tables, measured values) printed after the verdict.
  std::vector<std::string> report;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  // Empty runs everything.
  std::vector<std::string> only;
  unsigned threads = 1;
};

std::vector<std::string> acceptance_ids();

/// Runs the criteria in order; sink sees each result as soon as it is known.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& sink = {});

/// "PASS  id  title: detail" followed by indented report lines.
std::string format_result(const CriterionResult& r);

struct MaxEnergyEfficiency {
  mimo::Point x;
  ObjectiveVector g;
  std::uint64_t grid_points = 0;
  double seconds = 0.0;
};

/// Maximizes g3 over K = 1..N_max/2, N = 2..N_max (every integer) and P in
/// {0} plus a log grid of power_points values, then refines P locally.
MaxEnergyEfficiency max_energy_efficiency(const mimo::Params& params, std::size_t power_points = 200,
                                          int refine_levels = 30);

}  // namespace moo
