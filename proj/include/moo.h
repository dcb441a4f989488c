#ifndef MOO_H
#define MOO_H

#include <stddef.h>

#if defined(MOO_BUILDING_LIBRARY)
#define MOO_API __attribute__((visibility("default")))
#else
#define MOO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum moo_status {
  MOO_OK = 0,
  MOO_ERR_INVALID_ARGUMENT = 1,
  MOO_ERR_DIMENSION_MISMATCH = 2,
  MOO_ERR_NAN_INPUT = 3,
  MOO_ERR_EMPTY_INPUT = 4,
  MOO_ERR_EMPTY_GRID = 5,
  MOO_ERR_ALL_INFEASIBLE = 6,
  MOO_ERR_LAMBDA_MAX_TOO_SMALL = 7,
  MOO_ERR_OVER_CONSTRAINED = 8,
  MOO_ERR_NOT_FOUND = 9,
  MOO_ERR_UNSUPPORTED = 10,
  MOO_ERR_IO = 11,
  MOO_ERR_CANCELLED = 12,
  MOO_ERR_INTERNAL = 13
} moo_status;

typedef struct moo_problem moo_problem;
typedef struct moo_front moo_front;
typedef struct moo_server moo_server;

MOO_API const char* moo_version(void);
/* Machine-readable name of a status, e.g. "over_constrained". */
MOO_API const char* moo_status_name(moo_status status);
/* Message of the last failed call on this thread; "" if none. */
MOO_API const char* moo_last_error(void);
/* Frees strings returned through char** out-parameters. */
MOO_API void moo_string_free(char* s);

/* JSON array describing the built-in problems. */
MOO_API moo_status moo_problems_json(char** out);

/* params_path (may be NULL) is a key=value file for mimo_case_study. */
MOO_API moo_status moo_problem_open(const char* name, const char* params_path, moo_problem** out);
MOO_API void moo_problem_close(moo_problem* problem);
MOO_API moo_status moo_problem_info_json(const moo_problem* problem, char** out);

/* request: JSON object with optional "grid" and "refine_levels". */
MOO_API moo_status moo_utopia_json(const moo_problem* problem, const char* request, char** out);

/* request: {method: "grid"|"direction", count?, eps?, grid?, refine_levels?,
   threads?, created_at?}. NULL means all defaults. */
MOO_API moo_status moo_sample(const moo_problem* problem, const char* request, moo_front** out);
MOO_API size_t moo_front_size(const moo_front* front);
/* format: "json" or "csv". */
MOO_API moo_status moo_front_export(const moo_front* front, const char* format, char** out);
MOO_API moo_status moo_front_import(const char* json, moo_front** out);
MOO_API void moo_front_free(moo_front* front);

/* request: {kind, weights?|"utopia", reference?|"utopia", p?, grid?,
   refine_levels?}. Writes the solution as JSON. */
MOO_API moo_status moo_scalarize(const moo_problem* problem, const char* request, char** out);

/* Binds host:port (port 0 picks one) and serves on a background thread. */
MOO_API moo_status moo_server_start(const char* host, int port, const char* data_dir, moo_server** out);
MOO_API int moo_server_port(const moo_server* server);
/* Blocks until moo_server_stop is called from another thread. */
MOO_API void moo_server_wait(moo_server* server);
MOO_API void moo_server_stop(moo_server* server);
MOO_API void moo_server_free(moo_server* server);

/* Called once per acceptance criterion with its formatted report. */
typedef void (*moo_verify_callback)(const char* id, int passed, const char* report, void* user);

/* only: comma-separated criterion ids, NULL or "" for all. failures receives
   the number of failed criteria. */
MOO_API moo_status moo_verify(const char* only, unsigned threads, moo_verify_callback callback, void* user,
                              int* failures);

#ifdef __cplusplus
}
#endif

#endif
