// Command-line front end. Talks to the library through the C API only.
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "json.hpp"
#include "moo.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUser = 1;
constexpr int kExitInternal = 2;
constexpr int kExitVerifyFailed = 3;

struct Failure {
  int code;
  std::string message;
};

int exit_code(moo_status s) {
  switch (s) {
    case MOO_OK: return kExitOk;
    case MOO_ERR_INTERNAL:
    case MOO_ERR_CANCELLED: return kExitInternal;
    default: return kExitUser;
  }
}

void check(moo_status s) {
  if (s != MOO_OK) throw Failure{exit_code(s), std::string(moo_status_name(s)) + ": " + moo_last_error()};
}

// Owns a string returned by the library.
std::string take(char* s) {
  std::string out(s ? s : "");
  moo_string_free(s);
  return out;
}

struct Problem {
  moo_problem* handle = nullptr;
  Problem(const std::string& name, const std::string& params) {
    check(moo_problem_open(name.c_str(), params.empty() ? nullptr : params.c_str(), &handle));
  }
  ~Problem() { moo_problem_close(handle); }
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Failure{kExitUser, "cannot write " + path};
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{kExitUser, std::string(flag) + ": '" + item + "' is not a number"};
    }
  }
  if (out.empty()) throw Failure{kExitUser, std::string(flag) + ": empty list"};
  return out;
}

Json list_or_utopia(const std::string& text, const char* flag) {
  if (text == "utopia") return "utopia";
  return parse_list(text, flag);
}

// Fixed timestamps keep repeated runs byte-identical.
std::string creation_time() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void add_search_fields(Json& req, const std::string& grid, int refine_levels) {
  if (!grid.empty()) {
    try {
      req["grid"] = Json::parse(grid);
    } catch (const Json::parse_error&) {
      throw Failure{kExitUser, "--grid: not valid JSON"};
    }
  }
  if (refine_levels >= 0) req["refine_levels"] = refine_levels;
}

void verify_line(const char*, int, const char* report, void*) { std::cout << report << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective resource allocation: Pareto fronts, scalarization and an exploration service"};
  app.require_subcommand(1);
  std::string params_path;
  app.add_option("--params", params_path, "key=value constants file for mimo_case_study")->check(CLI::ExistingFile);

  bool problems_json = false;
  auto* problems = app.add_subcommand("problems", "List built-in problems");
  problems->add_flag("--json", problems_json, "Print the full JSON description");

  std::string problem, method = "direction", out, format = "json", grid;
  std::size_t count = 32;
  double eps = 1e-6;
  int refine_levels = -1;
  unsigned threads = 0;
  auto* sample = app.add_subcommand("sample", "Sample the Pareto boundary");
  sample->add_option("--problem", problem, "Problem name")->required();
  sample->add_option("--method", method, "grid | direction")->check(CLI::IsMember({"grid", "direction"}));
  sample->add_option("--count", count, "Number of search directions")->check(CLI::PositiveNumber);
  sample->add_option("--eps", eps, "Bisection tolerance")->check(CLI::PositiveNumber);
  sample->add_option("--out", out, "Output file (default stdout)");
  sample->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  sample->add_option("--grid", grid, "Search grid as JSON");
  sample->add_option("--refine-levels", refine_levels, "Local refinement depth")->check(CLI::Range(0, 64));
  sample->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string goal, weights, reference, norm = "2";
  auto* scalarize = app.add_subcommand("scalarize", "Solve one scalarized problem");
  scalarize->add_option("--problem", problem, "Problem name")->required();
  scalarize->add_option("--goal", goal, "sum | product | chebyshev | distance")
      ->required()
      ->check(CLI::IsMember({"sum", "product", "chebyshev", "distance"}));
  scalarize->add_option("--weights", weights, "a,b,c or 'utopia'");
  scalarize->add_option("--ref", reference, "Reference point a,b,c or 'utopia' (distance goal)");
  scalarize->add_option("--norm", norm, "1 | 2 | inf")->check(CLI::IsMember({"1", "2", "inf"}));
  scalarize->add_option("--out", out, "Output file (default stdout)");
  scalarize->add_option("--grid", grid, "Search grid as JSON");
  scalarize->add_option("--refine-levels", refine_levels, "Local refinement depth")->check(CLI::Range(0, 64));

  auto* utopia = app.add_subcommand("utopia", "Component-wise maxima of the objectives");
  utopia->add_option("--problem", problem, "Problem name")->required();
  utopia->add_option("--grid", grid, "Search grid as JSON");
  utopia->add_option("--refine-levels", refine_levels, "Local refinement depth")->check(CLI::Range(0, 64));

  const char* env_data = std::getenv("MOO_DATA_DIR");
  std::string host = "127.0.0.1", data_dir = env_data && *env_data ? env_data : "moo-data";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve->add_option("--port", port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve->add_option("--data", data_dir, "Storage directory (default $MOO_DATA_DIR or ./moo-data)");
  serve->add_option("--host", host, "Bind address");

  std::string only;
  unsigned verify_threads = 1;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--only", only, "Comma-separated criterion ids");
  verify->add_option("--threads", verify_threads, "Worker threads for the sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUser;
  }

  try {
    if (problems->parsed()) {
      const auto text = take([&] {
        char* s = nullptr;
        check(moo_problems_json(&s));
        return s;
      }());
      if (problems_json) {
        std::cout << text;
      } else {
        for (const auto& p : Json::parse(text)) {
          std::cout << p["name"].get<std::string>() << "  D=" << p["D"] << " M=" << p["M"] << "  objectives:";
          for (const auto& o : p["objectives"])
            std::cout << " " << o["name"].get<std::string>() << " [" << o["unit"].get<std::string>() << "]";
          std::cout << "\n";
        }
      }
    } else if (sample->parsed()) {
      Problem pb(problem, params_path);
      Json req;
      req["method"] = method;
      req["count"] = count;
      req["eps"] = eps;
      req["threads"] = threads;
      req["created_at"] = creation_time();
      add_search_fields(req, grid, refine_levels);
      moo_front* front = nullptr;
      check(moo_sample(pb.handle, req.dump().c_str(), &front));
      char* text = nullptr;
      const auto s = moo_front_export(front, format.c_str(), &text);
      moo_front_free(front);
      check(s);
      emit(take(text), out);
    } else if (scalarize->parsed()) {
      Problem pb(problem, params_path);
      Json req;
      req["kind"] = goal;
      if (goal == "distance") {
        if (reference.empty()) throw Failure{kExitUser, "--ref is required for the distance goal"};
        req["reference"] = list_or_utopia(reference, "--ref");
        req["p"] = norm;
      } else {
        if (weights.empty()) throw Failure{kExitUser, "--weights is required for the " + goal + " goal"};
        req["weights"] = list_or_utopia(weights, "--weights");
      }
      add_search_fields(req, grid, refine_levels);
      char* text = nullptr;
      check(moo_scalarize(pb.handle, req.dump().c_str(), &text));
      emit(take(text), out);
    } else if (utopia->parsed()) {
      Problem pb(problem, params_path);
      Json req = Json::object();
      add_search_fields(req, grid, refine_levels);
      char* text = nullptr;
      check(moo_utopia_json(pb.handle, req.dump().c_str(), &text));
      std::cout << take(text);
    } else if (serve->parsed()) {
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);
      moo_server* server = nullptr;
      check(moo_server_start(host.c_str(), port, data_dir.c_str(), &server));
      std::cout << "listening on http://" << host << ":" << moo_server_port(server) << "/api/v1 (data in " << data_dir
                << ")" << std::endl;
      int sig = 0;
      sigwait(&signals, &sig);
      moo_server_stop(server);
      moo_server_free(server);
    } else if (verify->parsed()) {
      int failures = 0;
      check(moo_verify(only.c_str(), verify_threads, verify_line, nullptr, &failures));
      std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
      return failures == 0 ? kExitOk : kExitVerifyFailed;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
