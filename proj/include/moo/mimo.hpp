#pragma once

#include <iosfwd>
#include <string>

#include "moo/core.hpp"
#include "moo/search.hpp"

namespace moo::mimo {

/// Downlink massive-MIMO dimensioning constants. Config keys in brackets.
struct Params {
  double bandwidth = 10e6;                  // [B] Hz
  double noise_power = 1e-13;               // [sigma2] W
  double cell_area = 0.0625;                // [A] km^2
  double lambda1 = 1.72e9;                  // [Lambda1] E{1 / serving channel variance}
  double lambda2 = 0.54;                    // [Lambda2] E{intercell / serving}
  double coherence_block = 1000;            // [Upsilon] channel uses
  double amplifier_efficiency = 0.31;       // [eta]
  double power_per_antenna = 1.0;           // [C_N] W
  double power_per_user = 0.3;              // [C_K] W
  double static_power = 10.0;               // [C_0] W
  double computational_efficiency = 12.8e9; // [L_eff] flop/s per W
  double max_antennas = 500;                // [N_max]
  double max_power_per_antenna = 20.0;      // [P_max] W
  // [T] Channel uses between precoder recomputations; 0 means the coherence
  // block, i.e. one zero-forcing computation per block.
  double precoding_interval = 0;

  double effective_precoding_interval() const noexcept {
    return precoding_interval > 0 ? precoding_interval : coherence_block;
  }
  void validate() const;
};

/// x = [K, N, P]: users per cell, antennas per BS, emitted power per BS (W).
struct Point {
  double users = 1;
  double antennas = 2;
  double power = 0;
};

/// K <= N/2, 2 <= N <= N_max, 0 <= P <= N * P_max, K >= 1, K and N integral.
bool admissible(const Point& pt, const Params& params);

/// bit/s per user with zero-forcing and perfect CSI.
double average_user_rate(const Point& pt, const Params& params);

/// W per cell: amplifiers, per-antenna and per-user circuits, precoding, static.
double total_power(const Point& pt, const Params& params);

/// Zero-forcing precoding load in flop/s: 3 K^2 N B / T.
double precoding_flops(const Point& pt, const Params& params);

/// (user rate bit/s/user, area rate bit/s/km^2, energy efficiency bit/J).
ObjectiveVector objectives(const Point& pt, const Params& params);

ProblemDefinition as_problem(const Params& params);

/// K 1..N_max/2, N even 2..N_max, P in {0} plus a log grid 1e-3..N_max*P_max.
SearchSpec default_search(const Params& params, std::size_t power_points = 50);

/// Parses key=value lines ('#' comments). Unknown keys and malformed values
/// throw invalid_argument.
Params parse_params(std::istream& in, Params base = {});
Params load_params(const std::string& path, Params base = {});

}  // namespace moo::mimo
