#include "moo/session.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "moo/scalar.hpp"

namespace moo {

Refinement Refinement::bounds(std::size_t dimension, std::optional<double> lower, std::optional<double> upper) {
  Refinement r;
  r.kind = Kind::bounds;
  r.index = dimension;
  r.lower = lower;
  r.upper = upper;
  return r;
}

Refinement Refinement::objective_floor(std::size_t objective, double value) {
  Refinement r;
  r.kind = Kind::floor;
  r.index = objective;
  r.floor = value;
  return r;
}

Json refinement_to_json(const Refinement& r) {
  Json doc;
  if (r.kind == Refinement::Kind::floor) {
    doc["kind"] = "floor";
    doc["objective"] = r.index;
    doc["value"] = r.floor;
  } else {
    doc["kind"] = "bounds";
    doc["dimension"] = r.index;
    if (r.lower) doc["lower"] = *r.lower;
    if (r.upper) doc["upper"] = *r.upper;
  }
  return doc;
}

Refinement refinement_from_json(const Json& doc) {
  try {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "floor") return Refinement::objective_floor(doc.at("objective").get<std::size_t>(), doc.at("value").get<double>());
    if (kind == "bounds") {
      std::optional<double> lo, hi;
      if (doc.contains("lower")) lo = doc["lower"].get<double>();
      if (doc.contains("upper")) hi = doc["upper"].get<double>();
      return Refinement::bounds(doc.at("dimension").get<std::size_t>(), lo, hi);
    }
    throw Error(ErrorCode::invalid_argument, "unknown refinement kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed refinement: ") + e.what());
  }
}

ProblemDefinition apply_refinements(const ProblemDefinition& base, const std::vector<Refinement>& refinements) {
  ProblemDefinition out = base;
  for (const auto& r : refinements) {
    if (r.kind == Refinement::Kind::floor) {
      if (r.index >= base.num_objectives())
        throw Error(ErrorCode::invalid_argument, "floor refers to objective " + std::to_string(r.index) + " which does not exist");
      if (!(r.floor >= 0.0) || !std::isfinite(r.floor))
        throw Error(ErrorCode::invalid_argument, "objective floors must be finite and nonnegative");
      out.constraints.push_back(
          {base.objectives[r.index].name + " >= " + std::to_string(r.floor),
           [eval = base.evaluator, m = base.num_objectives(), k = r.index, floor = r.floor](std::span<const double> x) {
             std::vector<double> g(m);
             eval(x, g);
             return g[k] >= floor;
           }});
    } else {
      const std::size_t d = r.index;
      if (d >= base.dims())
        throw Error(ErrorCode::invalid_argument, "bounds refer to dimension " + std::to_string(d) + " which does not exist");
      const double lo = r.lower.value_or(out.lower[d]);
      const double hi = r.upper.value_or(out.upper[d]);
      if (!std::isfinite(lo) || !std::isfinite(hi) || lo < base.lower[d] || hi > base.upper[d])
        throw Error(ErrorCode::invalid_argument, "tightened bounds must lie within the original box");
      if (lo > hi) throw Error(ErrorCode::invalid_argument, "tightened lower bound exceeds upper bound");
      out.lower[d] = std::max(out.lower[d], lo);
      out.upper[d] = std::min(out.upper[d], hi);
      if (out.lower[d] > out.upper[d])
        throw Error(ErrorCode::over_constrained, "bound tightening empties dimension " + std::to_string(d));
    }
  }
  if (out.origin && !out.feasible(*out.origin)) out.origin.reset();
  return out;
}

ProblemDefinition apply_refinements(const ProblemDefinition& base, const std::vector<Refinement>& refinements,
                                    const SearchSpec& search) {
  auto out = apply_refinements(base, refinements);
  if (out.origin) return out;
  try {
    SearchSpec clipped{clip_to_box(resolve(search.grid, base), out), search.refine_levels};
    SearchIndex probe(out, clipped);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::all_infeasible || e.code() == ErrorCode::empty_grid)
      throw Error(ErrorCode::over_constrained, "refinements leave no attainable operating point");
    throw;
  }
  return out;
}

SearchSpec search_from_request(const BuiltinProblem& base, const Json& request) {
  if (!request.is_object()) throw Error(ErrorCode::invalid_argument, "request must be a JSON object");
  SearchSpec s = base.search;
  if (request.contains("grid")) s.grid = grid_from_json(request["grid"], base.problem);
  if (request.contains("refine_levels")) {
    if (!request["refine_levels"].is_number_integer()) throw Error(ErrorCode::invalid_argument, "refine_levels must be an integer");
    s.refine_levels = request["refine_levels"].get<int>();
  }
  if (s.refine_levels < 0 || s.refine_levels > 64) throw Error(ErrorCode::invalid_argument, "refine_levels must be in [0, 64]");
  return s;
}

GoalSpec goal_from_request(const SearchIndex& index, const Json& request) {
  Json doc = request;
  const auto wants_utopia = [&](const char* field) {
    return doc.contains(field) && doc[field].is_string() && doc[field].get<std::string>() == "utopia";
  };
  if (wants_utopia("weights") || wants_utopia("reference")) {
    const auto u = utopia(index).values;
    if (wants_utopia("weights")) doc["weights"] = u;
    if (wants_utopia("reference")) doc["reference"] = u;
  }
  auto goal = goal_from_json(doc);
  goal.validate(index.num_objectives());
  return goal;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json session_to_json(const SessionState& s) {
  Json doc;
  doc["session_id"] = s.id;
  doc["problem"] = s.problem;
  doc["refinement_version"] = s.current;
  Json versions = Json::array();
  for (const auto& v : s.versions) {
    Json jv;
    jv["version"] = v.version;
    jv["parent"] = v.parent ? Json(*v.parent) : Json(nullptr);
    Json refs = Json::array();
    for (const auto& r : v.refinements) refs.push_back(refinement_to_json(r));
    jv["refinements"] = std::move(refs);
    versions.push_back(std::move(jv));
  }
  doc["versions"] = std::move(versions);
  doc["fronts"] = s.fronts;
  doc["created_at"] = s.created_at;
  doc["updated_at"] = s.updated_at;
  return doc;
}

SessionState session_from_json(const Json& doc) {
  try {
    SessionState s;
    s.id = doc.at("session_id").get<std::string>();
    s.problem = doc.at("problem").get<std::string>();
    s.current = doc.at("refinement_version").get<std::uint64_t>();
    for (const auto& jv : doc.at("versions")) {
      RefinementVersion v;
      v.version = jv.at("version").get<std::uint64_t>();
      if (!jv.at("parent").is_null()) v.parent = jv["parent"].get<std::uint64_t>();
      for (const auto& r : jv.at("refinements")) v.refinements.push_back(refinement_from_json(r));
      s.versions.push_back(std::move(v));
    }
    s.fronts = doc.at("fronts").get<std::map<std::string, std::string>>();
    s.created_at = doc.value("created_at", "");
    s.updated_at = doc.value("updated_at", "");
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed session document: ") + e.what());
  }
}

Json describe_problems() {
  Json out = Json::array();
  for (const auto& name : builtin_names()) {
    const auto b = builtin(name);
    const auto& p = b.problem;
    Json objectives = Json::array();
    for (const auto& o : p.objectives) objectives.push_back({{"name", o.name}, {"unit", o.unit}});
    Json box = Json::array();
    for (std::size_t d = 0; d < p.dims(); ++d)
      box.push_back({{"variable", p.variables.empty() ? "x" + std::to_string(d + 1) : p.variables[d]},
                     {"lower", p.lower[d]},
                     {"upper", p.upper[d]},
                     {"integral", static_cast<bool>(p.integral[d])}});
    out.push_back({{"name", p.name}, {"D", p.dims()}, {"M", p.num_objectives()}, {"objectives", objectives}, {"box", box}});
  }
  return out;
}

namespace {

std::string random_id(const char* prefix) {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream os;
  os << prefix << std::hex << rng();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write " + tmp);
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::not_found, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

struct SessionManager::Slot {
  std::mutex mutex;
  SessionState state;
  BuiltinProblem base;
  // Keyed by "version|grid|refine_levels". Bounded; see index_for.
  std::map<std::string, std::shared_ptr<const SearchIndex>> indices;
  std::map<std::string, ObjectiveVector> base_utopia;

  // Caller holds mutex.
  const std::vector<Refinement>& refinements(std::uint64_t version) const { return state.versions.at(version).refinements; }
};

struct SessionManager::Job {
  std::string id;
  std::string session;
  std::atomic<bool> cancel{false};
  std::mutex mutex;
  std::condition_variable cv;
  std::string status = "queued";
  std::size_t completed = 0;
  std::size_t total = 0;
  std::string front_id;
  std::string error_code;
  std::string error;
};

namespace {

struct IndexRequest {
  GridSpec grid;
  int refine_levels = 0;
  std::string key;
};

IndexRequest index_request(const BuiltinProblem& base, const Json& request) {
  IndexRequest r;
  const auto search = search_from_request(base, request);
  r.grid = search.grid;
  r.refine_levels = search.refine_levels;
  r.key = grid_to_json(r.grid).dump() + "|" + std::to_string(r.refine_levels);
  return r;
}

std::shared_ptr<const SearchIndex> build_index(const BuiltinProblem& base, const std::vector<Refinement>& refinements,
                                               const IndexRequest& req) {
  const auto resolved = resolve(req.grid, base.problem);
  auto derived = apply_refinements(base.problem, refinements);
  return std::make_shared<const SearchIndex>(derived, SearchSpec{clip_to_box(resolved, derived), req.refine_levels});
}

}  // namespace

SessionManager::SessionManager(std::filesystem::path data_dir, unsigned workers) : data_dir_(std::move(data_dir)) {
  std::filesystem::create_directories(data_dir_ / "sessions");
  std::filesystem::create_directories(data_dir_ / "fronts");
  for (const auto& entry : std::filesystem::directory_iterator(data_dir_ / "sessions")) {
    if (entry.path().extension() != ".json") continue;
    try {
      auto slot = std::make_shared<Slot>();
      slot->state = session_from_json(Json::parse(read_file(entry.path())));
      slot->base = builtin(slot->state.problem);
      sessions_[slot->state.id] = slot;
    } catch (const std::exception&) {
      // Unreadable session files are left on disk and ignored.
    }
  }
  for (unsigned i = 0; i < std::max(1u, workers); ++i) workers_.emplace_back([this] { worker_loop(); });
}

SessionManager::~SessionManager() {
  {
    std::lock_guard lock(mutex_);
    for (auto& [id, job] : jobs_) job->cancel = true;
  }
  {
    std::lock_guard lock(queue_mutex_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  for (auto& t : workers_) t.join();
}

void SessionManager::enqueue(std::function<void()> task) {
  {
    std::lock_guard lock(queue_mutex_);
    queue_.push_back(std::move(task));
  }
  queue_cv_.notify_one();
}

void SessionManager::worker_loop() {
  for (;;) {
    std::function<void()> task;
    {
      std::unique_lock lock(queue_mutex_);
      queue_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      task = std::move(queue_.front());
      queue_.pop_front();
    }
    task();
  }
}

Json SessionManager::list_problems() const { return describe_problems(); }

void SessionManager::persist(const SessionState& s) const {
  write_file(data_dir_ / "sessions" / (s.id + ".json"), session_to_json(s).dump(2) + "\n");
}

void SessionManager::persist(const std::string& front_id, const Front& f) const {
  write_file(data_dir_ / "fronts" / (front_id + ".json"), moo::export_front(f, ExportFormat::json));
}

std::string SessionManager::create_session(const std::string& problem) {
  auto slot = std::make_shared<Slot>();
  slot->base = builtin(problem);
  slot->state.id = random_id("s");
  slot->state.problem = problem;
  slot->state.versions.push_back(RefinementVersion{0, std::nullopt, {}});
  slot->state.created_at = slot->state.updated_at = utc_now();
  persist(slot->state);
  std::lock_guard lock(mutex_);
  sessions_[slot->state.id] = slot;
  return slot->state.id;
}

std::shared_ptr<SessionManager::Slot> SessionManager::slot(const std::string& id) {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::not_found, "no session '" + id + "'");
  return it->second;
}

Json SessionManager::session(const std::string& id) {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  return session_to_json(s->state);
}

std::uint64_t SessionManager::refine(const std::string& id, const std::vector<Refinement>& refinements) {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  auto combined = s->refinements(s->state.current);
  combined.insert(combined.end(), refinements.begin(), refinements.end());
  apply_refinements(s->base.problem, combined, s->base.search);
  const std::uint64_t version = s->state.versions.size();
  s->state.versions.push_back(RefinementVersion{version, s->state.current, std::move(combined)});
  s->state.current = version;
  s->state.updated_at = utc_now();
  persist(s->state);
  return version;
}

std::uint64_t SessionManager::rollback(const std::string& id, std::uint64_t version) {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  if (version >= s->state.versions.size())
    throw Error(ErrorCode::not_found, "session has no refinement version " + std::to_string(version));
  s->state.current = version;
  s->state.updated_at = utc_now();
  persist(s->state);
  return version;
}

std::shared_ptr<SessionManager::Job> SessionManager::find_job(const std::string& id) {
  std::lock_guard lock(mutex_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) throw Error(ErrorCode::not_found, "no job '" + id + "'");
  return it->second;
}

std::string SessionManager::submit_sample(const std::string& id, const Json& request) {
  auto s = slot(id);
  if (!request.is_object()) throw Error(ErrorCode::invalid_argument, "sample request must be a JSON object");
  const auto method = parse_front_method(request.value("method", std::string("direction")));
  if (method == FrontMethod::scalarization) throw Error(ErrorCode::invalid_argument, "sample method must be grid or direction");
  const auto ireq = index_request(s->base, request);
  const std::size_t count = request.value("count", std::size_t{32});
  const double eps = request.value("eps", 1e-6);
  if (method == FrontMethod::direction_search) {
    if (count == 0 || count > 100000) throw Error(ErrorCode::invalid_argument, "count must be in [1, 100000]");
    if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be > 0");
    generate_directions(s->base.problem.num_objectives(), count);
  }

  Json params;
  params["method"] = to_string(method);
  if (method == FrontMethod::direction_search) {
    params["count"] = count;
    params["eps"] = eps;
  }
  params["grid"] = Json::parse(ireq.key.substr(0, ireq.key.rfind('|')));
  params["refine_levels"] = ireq.refine_levels;

  auto job = std::make_shared<Job>();
  job->id = random_id("j");
  job->session = id;

  std::uint64_t version;
  std::vector<Refinement> refinements;
  std::string cache_key;
  {
    std::lock_guard lock(s->mutex);
    version = s->state.current;
    refinements = s->refinements(version);
    cache_key = params.dump() + "#v" + std::to_string(version);
    if (const auto hit = s->state.fronts.find(cache_key); hit != s->state.fronts.end()) {
      job->status = "done";
      job->front_id = hit->second;
    }
  }
  {
    std::lock_guard lock(mutex_);
    jobs_[job->id] = job;
  }
  if (job->status == "done") return job->id;

  enqueue([this, s, job, method, ireq, count, eps, version, refinements, cache_key] {
    {
      std::lock_guard lock(job->mutex);
      if (job->cancel) {
        job->status = "cancelled";
        job->cv.notify_all();
        return;
      }
      job->status = "running";
    }
    try {
      std::shared_ptr<const SearchIndex> index;
      std::optional<ObjectiveVector> base_u;
      const auto key = std::to_string(version) + "|" + ireq.key;
      {
        std::lock_guard lock(s->mutex);
        if (auto it = s->indices.find(key); it != s->indices.end()) index = it->second;
        if (auto it = s->base_utopia.find(ireq.key); it != s->base_utopia.end()) base_u = it->second;
      }
      if (!index) index = build_index(s->base, refinements, ireq);
      // lambda_max comes from the unrefined bundle so that refinements can
      // only lower lambda* along every direction.
      if (!base_u) base_u = moo::utopia(*build_index(s->base, {}, ireq)).values;
      {
        std::lock_guard lock(s->mutex);
        if (s->indices.size() >= 4) s->indices.erase(s->indices.begin());
        s->indices[key] = index;
        s->base_utopia[ireq.key] = *base_u;
      }

      Front front;
      if (method == FrontMethod::grid) {
        front = grid_sample(*index);
      } else {
        SampleOptions opts;
        opts.count = count;
        opts.eps = eps;
        opts.utopia = base_u;
        opts.cancel = &job->cancel;
        opts.progress = [job](std::size_t done, std::size_t total) {
          std::lock_guard lock(job->mutex);
          job->completed = done;
          job->total = total;
        };
        front = sample_front(*index, opts);
      }
      front.problem = s->base.problem.name;
      front.refinement_version = version;
      front.created_at = utc_now();
      const auto front_id = random_id("f");
      persist(front_id, front);
      {
        std::lock_guard lock(s->mutex);
        s->state.fronts.emplace(cache_key, front_id);
        s->state.updated_at = utc_now();
        persist(s->state);
      }
      std::lock_guard lock(job->mutex);
      job->front_id = front_id;
      job->status = "done";
    } catch (const Error& e) {
      std::lock_guard lock(job->mutex);
      job->status = e.code() == ErrorCode::cancelled ? "cancelled" : "failed";
      job->error_code = to_string(e.code());
      job->error = e.what();
    } catch (const std::exception& e) {
      std::lock_guard lock(job->mutex);
      job->status = "failed";
      job->error_code = "internal";
      job->error = e.what();
    }
    job->cv.notify_all();
  });
  return job->id;
}

Json SessionManager::job(const std::string& job_id) {
  auto j = find_job(job_id);
  std::string front_id;
  Json doc;
  {
    std::lock_guard lock(j->mutex);
    doc["job_id"] = j->id;
    doc["session_id"] = j->session;
    doc["status"] = j->status;
    doc["progress"] = {{"completed", j->completed}, {"total", j->total}};
    if (!j->error.empty()) doc["error"] = {{"code", j->error_code}, {"message", j->error}};
    front_id = j->front_id;
  }
  if (!front_id.empty()) {
    doc["front_id"] = front_id;
    doc["front"] = Json::parse(export_front(front_id, ExportFormat::json));
  }
  return doc;
}

void SessionManager::cancel_job(const std::string& job_id) {
  auto j = find_job(job_id);
  j->cancel = true;
}

Json SessionManager::wait_job(const std::string& job_id) {
  auto j = find_job(job_id);
  {
    std::unique_lock lock(j->mutex);
    j->cv.wait(lock, [&] { return j->status != "queued" && j->status != "running"; });
  }
  return job(job_id);
}

Json SessionManager::scalarize(const std::string& id, const Json& request) {
  auto s = slot(id);
  if (!request.is_object()) throw Error(ErrorCode::invalid_argument, "scalarize request must be a JSON object");
  const auto ireq = index_request(s->base, request);
  std::uint64_t version;
  std::vector<Refinement> refinements;
  std::shared_ptr<const SearchIndex> index;
  const auto lookup = [&] {
    std::lock_guard lock(s->mutex);
    version = s->state.current;
    refinements = s->refinements(version);
    const auto it = s->indices.find(std::to_string(version) + "|" + ireq.key);
    if (it != s->indices.end()) index = it->second;
  };
  lookup();
  if (!index) {
    index = build_index(s->base, refinements, ireq);
    std::lock_guard lock(s->mutex);
    if (s->indices.size() >= 4) s->indices.erase(s->indices.begin());
    s->indices[std::to_string(version) + "|" + ireq.key] = index;
  }

  const auto goal = goal_from_request(*index, request);
  const auto sol = solve_scalarized(*index, goal, ireq.refine_levels);
  auto doc = solution_to_json(sol, s->base.problem);
  doc["refinement_version"] = version;
  return doc;
}

Json SessionManager::utopia(const std::string& id) {
  auto s = slot(id);
  std::uint64_t version;
  std::vector<Refinement> refinements;
  {
    std::lock_guard lock(s->mutex);
    version = s->state.current;
    refinements = s->refinements(version);
  }
  const auto ireq = index_request(s->base, Json::object());
  std::shared_ptr<const SearchIndex> index;
  {
    std::lock_guard lock(s->mutex);
    const auto it = s->indices.find(std::to_string(version) + "|" + ireq.key);
    if (it != s->indices.end()) index = it->second;
  }
  if (!index) index = build_index(s->base, refinements, ireq);
  auto doc = utopia_to_json(moo::utopia(*index), s->base.problem);
  doc["refinement_version"] = version;
  return doc;
}

std::string SessionManager::export_front(const std::string& front_id, ExportFormat format) {
  if (front_id.find_first_of("/\\.") != std::string::npos) throw Error(ErrorCode::not_found, "no front '" + front_id + "'");
  std::string text;
  {
    std::lock_guard lock(mutex_);
    if (auto it = front_cache_.find(front_id); it != front_cache_.end()) text = it->second;
  }
  if (text.empty()) {
    const auto path = data_dir_ / "fronts" / (front_id + ".json");
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::not_found, "no front '" + front_id + "'");
    text = read_file(path);
    std::lock_guard lock(mutex_);
    if (front_cache_.size() > 64) front_cache_.clear();
    front_cache_[front_id] = text;
  }
  if (format == ExportFormat::json) return text;
  return moo::export_front(import_front(text), ExportFormat::csv);
}

}  // namespace moo
