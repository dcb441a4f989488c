#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "moo/front.hpp"
#include "moo/ordered_json.hpp"
#include "moo/problems.hpp"
#include "moo/serialize.hpp"

namespace moo {

/// One step of the interactive loop: shrink the box on a dimension, or
/// require a minimum level for an objective.
struct Refinement {
  enum class Kind { bounds, floor };

  Kind kind = Kind::floor;
  std::size_t index = 0;  // dimension (bounds) or objective (floor)
  std::optional<double> lower;
  std::optional<double> upper;
  double floor = 0.0;

  static Refinement bounds(std::size_t dimension, std::optional<double> lower, std::optional<double> upper);
  static Refinement objective_floor(std::size_t objective, double value);

  bool operator==(const Refinement&) const = default;
};

Json refinement_to_json(const Refinement& r);
Refinement refinement_from_json(const Json& doc);

/// The derived problem: tightened box plus g_m(x) >= floor_m predicates. The
/// base problem is untouched. Throws invalid_argument for negative floors or
/// bounds outside the base box.
ProblemDefinition apply_refinements(const ProblemDefinition& base, const std::vector<Refinement>& refinements);

/// As above, and throws over_constrained when the origin is excluded and no
/// point of the search grid survives.
ProblemDefinition apply_refinements(const ProblemDefinition& base, const std::vector<Refinement>& refinements,
                                    const SearchSpec& search);

/// grid and refine_levels fields of a sample/scalarize request, defaulting
/// to the problem's own search settings.
SearchSpec search_from_request(const BuiltinProblem& base, const Json& request);

/// {kind, weights?, reference?, p?}; the string "utopia" for weights or
/// reference stands for the utopia point of the index.
GoalSpec goal_from_request(const SearchIndex& index, const Json& request);

struct RefinementVersion {
  std::uint64_t version = 0;
  std::optional<std::uint64_t> parent;
  std::vector<Refinement> refinements;
};

struct SessionState {
  std::string id;
  std::string problem;
  std::vector<RefinementVersion> versions;  // versions[v].version == v
  std::uint64_t current = 0;
  // Cache key (method, params, version) -> front id.
  std::map<std::string, std::string> fronts;
  std::string created_at;
  std::string updated_at;
};

Json session_to_json(const SessionState& s);
SessionState session_from_json(const Json& doc);

std::string utc_now();

/// [{name, D, M, objectives: [{name, unit}], box: [{variable, lower, upper, integral}]}]
Json describe_problems();

/// Sessions, jobs and persisted fronts behind the HTTP layer. Sessions are
/// mutated under their own lock; sampling runs on a worker pool.
class SessionManager {
 public:
  SessionManager(std::filesystem::path data_dir, unsigned workers = 2);
  ~SessionManager();
  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  Json list_problems() const;
  std::string create_session(const std::string& problem);
  Json session(const std::string& id);
  /// Returns the new refinement version.
  std::uint64_t refine(const std::string& id, const std::vector<Refinement>& refinements);
  /// Makes an earlier version current again; cached fronts stay valid.
  std::uint64_t rollback(const std::string& id, std::uint64_t version);

  /// {method: "grid"|"direction", count?, grid?, eps?} -> job id.
  std::string submit_sample(const std::string& id, const Json& request);
  Json job(const std::string& job_id);
  void cancel_job(const std::string& job_id);
  /// Blocks until the job leaves the queued/running states.
  Json wait_job(const std::string& job_id);

  /// {kind, weights? | "utopia", reference? | "utopia", p?}
  Json scalarize(const std::string& id, const Json& request);
  Json utopia(const std::string& id);

  std::string export_front(const std::string& front_id, ExportFormat format);

 private:
  struct Slot;
  struct Job;

  std::shared_ptr<Slot> slot(const std::string& id);
  std::shared_ptr<Job> find_job(const std::string& id);
  void persist(const SessionState& s) const;
  void persist(const std::string& front_id, const Front& f) const;
  void enqueue(std::function<void()> task);
  void worker_loop();

  std::filesystem::path data_dir_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::map<std::string, std::string> front_cache_;  // front id -> exported JSON

  std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::deque<std::function<void()>> queue_;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace moo
