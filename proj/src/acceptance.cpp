#include "moo/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <random>
#include <set>

#include "moo/front.hpp"
#include "moo/problems.hpp"
#include "moo/scalar.hpp"
#include "moo/session.hpp"

namespace moo {

namespace {

// Published operating point at maximal energy efficiency.
constexpr double kPublishedUserRate = 20.4e6;  // bit/s/user
constexpr double kPublishedEnergyEfficiency = 11.1e6;  // bit/J
constexpr double kMaxEeTolerance = 0.50;
constexpr double kMaxEeReportThreshold = 0.10;
constexpr double kMaxEeRuntimeTarget = 60.0;  // s

constexpr std::size_t kIdentitySamples = 100000;
constexpr std::size_t kFilterInstances = 200;
constexpr std::size_t kFilterMaxPoints = 1000;

constexpr std::size_t kToyDirections = 64;
constexpr double kToyEps = 1e-6;
constexpr double kToyTolerance = 2e-6;

constexpr std::size_t kShapeDirections = 64;
constexpr double kRetentionMinRetention = 0.50;
// First verified run of the 64-direction (g2, g3) sweep on the default grid.
constexpr double kRetentionGolden = 0.055556;
constexpr double kRetentionGoldenTolerance = 0.02;  // relative

constexpr std::size_t kChebyshevTrials = 16;
constexpr double kChebyshevEps = 1e-6;

constexpr std::size_t kMonotoneDirections = 8;
constexpr double kMonotoneEps = 1e-6;

constexpr std::size_t kUtopiaDirections = 32;
constexpr double kUtopiaShrink = 0.99;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double rel_dev(double got, double want) { return (got - want) / want; }

struct Context {
  AcceptanceOptions options;
  mimo::Params params;
  ProblemDefinition mimo_problem = mimo::as_problem(params);
  SearchSpec mimo_search = mimo::default_search(params);
  std::unique_ptr<SearchIndex> mimo_index;

  const SearchIndex& mimo() {
    if (!mimo_index) mimo_index = std::make_unique<SearchIndex>(mimo_problem, mimo_search);
    return *mimo_index;
  }
};

CriterionResult max_ee(Context& ctx) {
  CriterionResult r{"max_ee", "case-study max-EE point", false, "", {}, 0};
  const auto base = max_energy_efficiency(ctx.params);
  const double d1 = rel_dev(base.g[0], kPublishedUserRate);
  const double d3 = rel_dev(base.g[2], kPublishedEnergyEfficiency);
  r.passed = std::abs(d1) <= kMaxEeTolerance && std::abs(d3) <= kMaxEeTolerance && base.seconds < kMaxEeRuntimeTarget;
  r.detail = fmt("K=%g N=%g P=%.4g W, g1=%.4g Mbit/s (published 20.4, %+.1f%%), g3=%.4g Mbit/J (published 11.1, %+.1f%%), "
                 "%llu grid points in %.1f s",
                 base.x.users, base.x.antennas, base.x.power, base.g[0] / 1e6, 100 * d1, base.g[2] / 1e6, 100 * d3,
                 static_cast<unsigned long long>(base.grid_points), base.seconds);
  if (std::max(std::abs(d1), std::abs(d3)) > kMaxEeReportThreshold) {
    r.report.push_back("deviation exceeds 10%; sensitivity of the optimum:");
    r.report.push_back(fmt("%-8s %-6s %-5s | %4s %4s %9s | %10s %10s | %8s %8s", "T", "eta", "C_N", "K", "N", "P [W]",
                           "g1 Mbit/s", "g3 Mbit/J", "dg1", "dg3"));
    for (double t : {ctx.params.coherence_block, ctx.params.coherence_block / 2})
      for (double eta : {ctx.params.amplifier_efficiency, 0.5})
        for (double cn : {ctx.params.power_per_antenna, 0.5}) {
          auto p = ctx.params;
          p.precoding_interval = t;
          p.amplifier_efficiency = eta;
          p.power_per_antenna = cn;
          const bool is_base = t == ctx.params.coherence_block && eta == ctx.params.amplifier_efficiency &&
                               cn == ctx.params.power_per_antenna;
          const auto s = is_base ? base : max_energy_efficiency(p);
          r.report.push_back(fmt("%-8g %-6g %-5g | %4g %4g %9.4g | %10.4f %10.4f | %+7.1f%% %+7.1f%%", t, eta, cn,
                                 s.x.users, s.x.antennas, s.x.power, s.g[0] / 1e6, s.g[2] / 1e6,
                                 100 * rel_dev(s.g[0], kPublishedUserRate), 100 * rel_dev(s.g[2], kPublishedEnergyEfficiency)));
        }
  }
  return r;
}

CriterionResult area_identity(Context& ctx) {
  CriterionResult r{"area_identity", "g2 = (K/A) g1 bit-exact", false, "", {}, 0};
  std::mt19937_64 rng(0x5eed0001);
  const auto& pb = ctx.mimo_problem;
  const int n_max = static_cast<int>(ctx.params.max_antennas);
  std::size_t mismatches = 0;
  std::vector<double> g(3);
  for (std::size_t i = 0; i < kIdentitySamples; ++i) {
    const int n = std::uniform_int_distribution<int>(2, n_max)(rng);
    const int k = std::uniform_int_distribution<int>(1, n / 2)(rng);
    const double log_hi = std::log(n * ctx.params.max_power_per_antenna);
    const double p = std::exp(std::uniform_real_distribution<double>(std::log(1e-3), log_hi)(rng));
    const std::vector<double> x{double(k), double(n), std::min(p, n * ctx.params.max_power_per_antenna)};
    if (!pb.feasible(x)) {
      ++mismatches;
      continue;
    }
    pb.evaluate(x, g);
    if (g[1] != (x[0] / ctx.params.cell_area) * g[0]) ++mismatches;
  }
  r.passed = mismatches == 0;
  r.detail = fmt("%zu random feasible points, %zu mismatches", kIdentitySamples, mismatches);
  return r;
}

CriterionResult utopia_infeasible(Context& ctx) {
  CriterionResult r{"utopia_infeasible", "utopia point is not attainable", false, "", {}, 0};
  const auto& index = ctx.mimo();
  const auto u = utopia(index).values;
  const bool absent = !membership_test(index, u);
  SampleOptions opts;
  opts.count = kUtopiaDirections;
  opts.threads = ctx.options.threads;
  opts.utopia = u;
  const auto front = sample_front(index, opts);
  std::size_t certified = 0, present = 0;
  for (const auto& p : front.points) {
    if (p.boundary_kind != BoundaryKind::strong_certified) continue;
    ++certified;
    std::vector<double> mu(p.g.size());
    for (std::size_t k = 0; k < mu.size(); ++k) mu[k] = kUtopiaShrink * *p.lambda * (*p.direction)[k];
    if (membership_test(index, mu)) ++present;
  }
  r.passed = absent && certified > 0 && present == certified && front.errors.empty();
  r.detail = fmt("u=(%.4g, %.4g, %.4g): membership %s; %zu/%zu certified points present at 0.99 lambda v",
                 u[0], u[1], u[2], absent ? "absent" : "PRESENT", present, certified);
  return r;
}

CriterionResult toy_bisection(Context& ctx) {
  CriterionResult r{"toy_bisection", "bisection oracle on the toy simplex", false, "", {}, 0};
  const auto b = builtin("toy_simplex");
  const SearchIndex index(b.problem, b.search);
  SampleOptions opts;
  opts.count = kToyDirections;
  opts.eps = kToyEps;
  opts.threads = ctx.options.threads;
  const auto front = sample_front(index, opts);
  const auto u = utopia(index).values;
  double worst = 0.0;
  std::size_t bad_iterations = 0;
  for (const auto& p : front.points) {
    const auto& v = *p.direction;
    worst = std::max(worst, std::abs(*p.lambda * (v[0] + v[1]) - 1.0));
    // Independent count: one check at lambda_max plus one per halving.
    const double lambda_max = 1.01 * std::min(u[0] / v[0], u[1] / v[1]);
    const int expected = static_cast<int>(std::ceil(std::log2(lambda_max / kToyEps))) + 1;
    if (p.iterations != expected) ++bad_iterations;
  }
  r.passed = front.points.size() == kToyDirections && front.errors.empty() && worst <= kToyTolerance &&
             bad_iterations == 0;
  r.detail = fmt("%zu points, max |lambda(v1+v2) - 1| = %.3g (tol 2e-6), %zu iteration-count mismatches",
                 front.points.size(), worst, bad_iterations);
  return r;
}

std::vector<std::size_t> brute_force_survivors(const std::vector<double>& values, std::size_t m) {
  const std::size_t n = values.size() / m;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < n && !dominated; ++j) {
      bool ge = true, gt = false;
      for (std::size_t k = 0; k < m; ++k) {
        ge = ge && values[j * m + k] >= values[i * m + k];
        gt = gt || values[j * m + k] > values[i * m + k];
      }
      dominated = ge && gt;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

CriterionResult filter_oracle(Context&) {
  CriterionResult r{"filter_oracle", "dominance filter equals brute force", false, "", {}, 0};
  std::mt19937_64 rng(0x5eed0002);
  std::size_t discrepancies = 0, total_points = 0;
  for (std::size_t inst = 0; inst < kFilterInstances; ++inst) {
    const std::size_t m = 2 + inst % 2;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, kFilterMaxPoints)(rng);
    // A third of the instances use a coarse integer lattice so ties and
    // duplicate rows are common.
    const bool lattice = inst % 3 == 0;
    std::vector<double> values(n * m);
    for (auto& v : values)
      v = lattice ? double(std::uniform_int_distribution<int>(0, 6)(rng)) : std::uniform_real_distribution<double>()(rng);
    total_points += n;
    const auto oracle = brute_force_survivors(values, m);
    if (nondominated_indices(values, m) != oracle) ++discrepancies;

    std::vector<LabeledPoint> labeled;
    for (std::size_t i = 0; i < n; ++i)
      labeled.push_back({{double(i)}, {values.begin() + i * m, values.begin() + (i + 1) * m}});
    std::vector<std::size_t> got;
    for (const auto& [x, g] : pareto_filter(labeled)) got.push_back(static_cast<std::size_t>(x[0]));
    std::sort(got.begin(), got.end());
    if (got != oracle) ++discrepancies;
  }
  r.passed = discrepancies == 0;
  r.detail = fmt("%zu instances, %zu points, %zu discrepancies", kFilterInstances, total_points, discrepancies);
  return r;
}

Front pair_front(Context& ctx, std::size_t a, std::size_t b, std::unique_ptr<SearchIndex>& index) {
  index = std::make_unique<SearchIndex>(restrict_objectives(ctx.mimo_problem, {a, b}), ctx.mimo_search);
  SampleOptions opts;
  opts.count = kShapeDirections;
  opts.threads = ctx.options.threads;
  return sample_front(*index, opts);
}

std::vector<ObjectiveVector> sorted_distinct(const Front& f) {
  std::vector<ObjectiveVector> pts;
  for (const auto& p : f.points) pts.push_back(p.g);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

CriterionResult ee_front_unimodal(Context& ctx) {
  CriterionResult r{"ee_front_unimodal", "(g1, g3) front is unimodal in g3", false, "", {}, 0};
  std::unique_ptr<SearchIndex> index;
  const auto front = pair_front(ctx, 0, 2, index);
  const auto pts = sorted_distinct(front);
  const auto peak = std::max_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a[1] < b[1]; });
  std::size_t peaks = 0, violations = 0;
  for (const auto& p : pts) peaks += p[1] == (*peak)[1];
  for (auto it = pts.begin(); it + 1 < pts.end(); ++it) {
    const bool rising = it + 1 <= peak;
    if (rising ? (*(it + 1))[1] < (*it)[1] : (*(it + 1))[1] > (*it)[1]) ++violations;
  }
  const double grid_max = utopia(*index).values[1];
  std::size_t strong = 0;
  for (const auto& p : front.points) strong += p.boundary_kind == BoundaryKind::strong_certified;
  r.passed = front.errors.empty() && violations == 0 && peaks == 1 && (*peak)[1] == grid_max;
  r.detail = fmt("%zu points (%zu distinct, %zu strong), peak g3=%.4g Mbit/J at g1=%.4g Mbit/s (position %zu), "
                 "%zu monotonicity violations",
                 front.points.size(), pts.size(), strong, (*peak)[1] / 1e6, (*peak)[0] / 1e6,
                 static_cast<std::size_t>(peak - pts.begin()), violations);
  if (!r.passed)
    for (const auto& p : pts) r.report.push_back(fmt("g1=%.6g g3=%.6g", p[0], p[1]));
  return r;
}

CriterionResult ee_retention(Context& ctx) {
  CriterionResult r{"ee_retention", "EE retained at max area rate", false, "", {}, 0};
  std::unique_ptr<SearchIndex> index;
  const auto front = pair_front(ctx, 1, 2, index);
  const auto pts = sorted_distinct(front);
  // Sorted ascending by (g2, g3): the last entry has max g2, best g3 among ties.
  const auto& at_max_g2 = pts.back();
  double max_g3 = 0.0;
  for (const auto& p : pts) max_g3 = std::max(max_g3, p[1]);
  const double retained = at_max_g2[1] / max_g3;
  const bool golden_ok = std::abs(retained - kRetentionGolden) <= kRetentionGoldenTolerance * kRetentionGolden;
  r.passed = front.errors.empty() && retained >= kRetentionMinRetention && golden_ok;
  r.detail = fmt("g3 at max g2 (%.4g bit/s/km^2) = %.4g Mbit/J of max %.4g Mbit/J: retained %.4f%% (need >= 50%%); "
                 "golden %s",
                 at_max_g2[0], at_max_g2[1] / 1e6, max_g3 / 1e6, 100 * retained,
                 fmt("%.4f%% %s", 100 * kRetentionGolden, golden_ok ? "matches" : "MISMATCH").c_str());
  return r;
}

CriterionResult chebyshev_cross(Context& ctx) {
  CriterionResult r{"chebyshev_cross", "chebyshev solve agrees with bisection", false, "", {}, 0};
  std::mt19937_64 rng(0x5eed0003);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  const auto toy = builtin("toy_simplex");
  const SearchIndex toy_index(toy.problem, toy.search);
  std::size_t failures = 0;
  double worst = 0.0;
  const auto run = [&](const SearchIndex& index, int refine_levels) {
    const auto u = utopia(index).values;
    for (std::size_t t = 0; t < kChebyshevTrials; ++t) {
      // Weights in utopia-normalized units so that eps is meaningful on
      // every scale.
      std::vector<double> w(u.size());
      for (std::size_t k = 0; k < w.size(); ++k) w[k] = u[k] * unit(rng);
      double ratio = INFINITY, norm = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) {
        ratio = std::min(ratio, u[k] / w[k]);
        norm += w[k] * w[k];
      }
      norm = std::sqrt(norm);
      const auto sol = solve_scalarized(index, GoalSpec::weighted(GoalKind::chebyshev, w), refine_levels, kChebyshevEps);
      const auto ray = bisect_ray(index, w, kChebyshevEps, (1.0 + kLambdaMaxMargin) * ratio);
      const double gap = std::abs(*ray.lambda - sol.value) * norm;
      worst = std::max(worst, gap / (kChebyshevEps * norm));
      if (gap > kChebyshevEps * norm) ++failures;
    }
  };
  run(toy_index, toy.search.refine_levels);
  run(ctx.mimo(), ctx.mimo_search.refine_levels);
  r.passed = failures == 0;
  r.detail = fmt("%zu weight vectors on toy and MIMO, %zu disagreements, worst gap %.3g x eps|w|",
                 kChebyshevTrials, failures, worst);
  return r;
}

CriterionResult refinement_monotone(Context& ctx) {
  CriterionResult r{"refinement_monotone", "lambda* non-increasing under nested refinements", false, "", {}, 0};
  const auto& base = ctx.mimo();
  const auto u = utopia(base).values;
  const auto dirs = generate_directions(3, kMonotoneDirections);
  const std::vector<Refinement> nest = {
      Refinement::objective_floor(2, 1e6),
      Refinement::bounds(1, std::nullopt, 400),
      Refinement::objective_floor(0, 5e6),
      Refinement::bounds(0, std::nullopt, 100),
      Refinement::objective_floor(2, 4e6),
  };
  std::vector<std::vector<double>> lambdas(kMonotoneDirections);
  std::size_t errors = 0;
  const auto sweep = [&](const SearchIndex& index) {
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      std::vector<double> v(3);
      double ratio = INFINITY;
      for (std::size_t k = 0; k < 3; ++k) {
        v[k] = u[k] * dirs[i][k];
        ratio = std::min(ratio, u[k] / v[k]);
      }
      try {
        lambdas[i].push_back(*bisect_ray(index, v, kMonotoneEps, (1.0 + kLambdaMaxMargin) * ratio).lambda);
      } catch (const Error&) {
        ++errors;
        lambdas[i].push_back(NAN);
      }
    }
  };
  sweep(base);
  std::vector<Refinement> applied;
  for (const auto& step : nest) {
    applied.push_back(step);
    const auto derived = apply_refinements(ctx.mimo_problem, applied);
    const SearchIndex index(derived, SearchSpec{clip_to_box(base.grid(), derived), base.refine_levels()});
    sweep(index);
  }
  std::size_t increases = 0;
  for (const auto& seq : lambdas) {
    for (std::size_t j = 1; j < seq.size(); ++j)
      if (!(seq[j] <= seq[j - 1])) ++increases;
    std::string line = "lambda*:";
    for (double l : seq) line += fmt(" %.6f", l);
    r.report.push_back(line);
  }
  r.passed = errors == 0 && increases == 0;
  r.detail = fmt("%zu directions x %zu nested refinements, %zu increases, %zu errors", kMonotoneDirections,
                 nest.size(), increases, errors);
  return r;
}

using Runner = CriterionResult (*)(Context&);

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> list = {
      {"max_ee", max_ee},
      {"area_identity", area_identity},
      {"utopia_infeasible", utopia_infeasible},
      {"toy_bisection", toy_bisection},
      {"filter_oracle", filter_oracle},
      {"ee_front_unimodal", ee_front_unimodal},
      {"ee_retention", ee_retention},
      {"chebyshev_cross", chebyshev_cross},
      {"refinement_monotone", refinement_monotone},
  };
  return list;
}

}  // namespace

MaxEnergyEfficiency max_energy_efficiency(const mimo::Params& params, std::size_t power_points, int refine_levels) {
  const auto t0 = Clock::now();
  const auto full = mimo::as_problem(params);
  const auto ee_only = restrict_objectives(full, {2});
  SearchSpec search;
  search.grid.axes = {GridAxis::range(1, std::floor(params.max_antennas / 2), 1),
                      GridAxis::range(2, params.max_antennas, 1),
                      GridAxis::logarithmic(1e-3, params.max_antennas * params.max_power_per_antenna, power_points, true)};
  const auto sol = solve_scalarized(ee_only, GoalSpec::weighted(GoalKind::sum, {1.0}), search, refine_levels);
  MaxEnergyEfficiency out;
  out.x = {sol.x[0], sol.x[1], sol.x[2]};
  out.g = full.evaluate(sol.x);
  out.grid_points = sol.diagnostics.grid_points;
  out.seconds = since(t0);
  return out;
}

std::vector<std::string> acceptance_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : registry()) ids.push_back(id);
  return ids;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& sink) {
  for (const auto& id : options.only) {
    const auto ids = acceptance_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
      throw Error(ErrorCode::not_found, "unknown acceptance criterion '" + id + "'");
  }
  Context ctx;
  ctx.options = options;
  std::vector<CriterionResult> results;
  for (const auto& [id, fn] : registry()) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end())
      continue;
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = fn(ctx);
    } catch (const std::exception& e) {
      r.id = id;
      r.title = id;
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = since(t0);
    if (sink) sink(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  std::string out = fmt("%s  %-20s %s: ", r.passed ? "PASS" : "FAIL", r.id.c_str(), r.title.c_str());
  out += r.detail;
  out += fmt(" [%.1f s]", r.seconds);
  for (const auto& line : r.report) out += "\n      " + line;
  return out;
}

}  // namespace moo
