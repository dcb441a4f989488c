#include "moo/mimo.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <string>

namespace moo::mimo {

void Params::validate() const {
  const auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::invalid_argument, std::string("mimo parameter ") + key + " must be positive and finite");
  };
  positive(bandwidth, "B");
  positive(noise_power, "sigma2");
  positive(cell_area, "A");
  positive(lambda1, "Lambda1");
  positive(lambda2, "Lambda2");
  positive(coherence_block, "Upsilon");
  positive(amplifier_efficiency, "eta");
  positive(power_per_antenna, "C_N");
  positive(power_per_user, "C_K");
  positive(static_power, "C_0");
  positive(computational_efficiency, "L_eff");
  positive(max_antennas, "N_max");
  positive(max_power_per_antenna, "P_max");
  if (precoding_interval < 0 || !std::isfinite(precoding_interval))
    throw Error(ErrorCode::invalid_argument, "mimo parameter T must be >= 0");
  if (amplifier_efficiency > 1.0) throw Error(ErrorCode::invalid_argument, "mimo parameter eta must lie in (0, 1]");
  if (max_antennas < 2 || std::floor(max_antennas) != max_antennas)
    throw Error(ErrorCode::invalid_argument, "mimo parameter N_max must be an integer >= 2");
}

bool admissible(const Point& pt, const Params& params) {
  const double k = pt.users, n = pt.antennas, p = pt.power;
  return std::floor(k) == k && std::floor(n) == n && k >= 1 && 2 * k <= n && n >= 2 &&
         n <= params.max_antennas && p >= 0 && p <= n * params.max_power_per_antenna;
}

namespace {

void require(const Point& pt, const Params& params) {
  if (!admissible(pt, params)) throw Error(ErrorCode::invalid_argument, "mimo point violates the resource bundle");
}

}  // namespace

double average_user_rate(const Point& pt, const Params& params) {
  require(pt, params);
  const double k = pt.users, n = pt.antennas, p = pt.power;
  if (k >= params.coherence_block)
    throw Error(ErrorCode::invalid_argument, "user count must be below the coherence block length");
  if (p == 0.0) return 0.0;
  const double sinr = (p / k) * (n - k) / (params.noise_power * params.lambda1 + p * params.lambda2);
  return params.bandwidth * (1.0 - k / params.coherence_block) * std::log2(1.0 + sinr);
}

double precoding_flops(const Point& pt, const Params& params) {
  const double k = pt.users, n = pt.antennas;
  return 3.0 * k * k * n * params.bandwidth / params.effective_precoding_interval();
}

double total_power(const Point& pt, const Params& params) {
  require(pt, params);
  return pt.power / params.amplifier_efficiency + pt.antennas * params.power_per_antenna +
         pt.users * params.power_per_user + precoding_flops(pt, params) / params.computational_efficiency +
         params.static_power;
}

ObjectiveVector objectives(const Point& pt, const Params& params) {
  const double rate = average_user_rate(pt, params);
  const double k = pt.users;
  return {rate, (k / params.cell_area) * rate, k * rate / total_power(pt, params)};
}

ProblemDefinition as_problem(const Params& params) {
  params.validate();
  ProblemDefinition p;
  p.name = "mimo_case_study";
  p.variables = {"K", "N", "P"};
  p.lower = {1, 2, 0};
  p.upper = {std::floor(params.max_antennas / 2), params.max_antennas,
             params.max_antennas * params.max_power_per_antenna};
  p.integral = {true, true, false};
  p.constraints.push_back({"K <= N/2", [](std::span<const double> x) { return 2 * x[0] <= x[1]; }});
  p.constraints.push_back(
      {"P <= N*P_max", [pmax = params.max_power_per_antenna](std::span<const double> x) { return x[2] <= x[1] * pmax; }});
  p.objectives = {{"user_rate", "bit/s/user"}, {"area_rate", "bit/s/km^2"}, {"energy_efficiency", "bit/J"}};
  p.evaluator = [params](std::span<const double> x, std::span<double> g) {
    const auto v = objectives({x[0], x[1], x[2]}, params);
    std::copy(v.begin(), v.end(), g.begin());
  };
  p.origin = ResourcePoint{1, 2, 0};
  p.validate();
  return p;
}

SearchSpec default_search(const Params& params, std::size_t power_points) {
  SearchSpec s;
  const double n_max = params.max_antennas;
  s.grid.axes.push_back(GridAxis::range(1, std::floor(n_max / 2), 1));
  s.grid.axes.push_back(GridAxis::range(2, n_max, 2));
  s.grid.axes.push_back(GridAxis::logarithmic(1e-3, n_max * params.max_power_per_antenna, power_points, true));
  s.refine_levels = 0;
  return s;
}

Params parse_params(std::istream& in, Params base) {
  const std::map<std::string, double Params::*> keys = {
      {"B", &Params::bandwidth},
      {"sigma2", &Params::noise_power},
      {"A", &Params::cell_area},
      {"Lambda1", &Params::lambda1},
      {"Lambda2", &Params::lambda2},
      {"Upsilon", &Params::coherence_block},
      {"eta", &Params::amplifier_efficiency},
      {"C_N", &Params::power_per_antenna},
      {"C_K", &Params::power_per_user},
      {"C_0", &Params::static_power},
      {"L_eff", &Params::computational_efficiency},
      {"N_max", &Params::max_antennas},
      {"P_max", &Params::max_power_per_antenna},
      {"T", &Params::precoding_interval},
  };
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto where = "params line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw Error(ErrorCode::invalid_argument, where + "expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto text = trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw Error(ErrorCode::invalid_argument, where + "unknown key '" + key + "'");
    double value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw Error(ErrorCode::invalid_argument, where + "malformed number '" + text + "'");
    base.*(it->second) = value;
  }
  base.validate();
  return base;
}

Params load_params(const std::string& path, Params base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open params file " + path);
  return parse_params(in, base);
}

}  // namespace moo::mimo
