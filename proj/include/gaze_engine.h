#ifndef GAZE_ENGINE_H
#define GAZE_ENGINE_H

/*
 * C interface of the gaze-interaction engine.
 *
 * Every fallible call returns a ge_status; on failure ge_last_error()
 * describes the problem for the calling thread. Strings returned through
 * `char** out` parameters are owned by the caller and released with
 * ge_string_free(). Handles are opaque and released by their *_free call,
 * which accepts NULL.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(GAZE_ENGINE_BUILDING)
#define GE_API __attribute__((visibility("default")))
#else
#define GE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ge_status {
  GE_OK = 0,
  GE_INVALID_ARGUMENT,
  GE_NON_MONOTONIC_TIMESTAMP,
  GE_OVERLAPPING_FIXATIONS,
  GE_DEGENERATE_PATH,
  GE_DUPLICATE_NAME,
  GE_UNKNOWN_LABEL,
  GE_NO_GAZE_FIX,
  GE_PROTOCOL_VIOLATION,
  GE_INSUFFICIENT_GAZE,
  GE_SEPARATION_UNSATISFIABLE,
  GE_EMPTY_SESSION,
  GE_EMPTY_STORE,
  GE_PARSE_ERROR,
  GE_IO_ERROR,
  GE_UNKNOWN_TYPE,
  GE_UNKNOWN_SESSION,
  GE_NULL_ARGUMENT,
  GE_INTERNAL
} ge_status;

GE_API const char* ge_status_name(ge_status status);
GE_API const char* ge_last_error(void);
GE_API const char* ge_version(void);
GE_API void ge_string_free(char* s);

/* Gesture template store. */
typedef struct ge_store ge_store;

typedef enum ge_path_source { GE_SOURCE_FIXATIONS = 0, GE_SOURCE_RAW = 1 } ge_path_source;

GE_API ge_status ge_store_create(int resample_count, double reject_threshold, ge_store** out);
GE_API ge_status ge_store_bundled(ge_store** out);
GE_API ge_status ge_store_load(const char* path, ge_store** out);
GE_API ge_status ge_store_save(const ge_store* store, const char* path);
GE_API void ge_store_free(ge_store* store);
GE_API size_t ge_store_size(const ge_store* store);
/* Trains one template per name found in a paths file. */
GE_API ge_status ge_store_train_paths(ge_store* store, const char* paths_file);
/* Recognizes a point list given as x0,y0,x1,y1,...; *out is a JSON object
   with "matched" and, when matched, template, action_id, score, distance. */
GE_API ge_status ge_store_recognize(const ge_store* store, const double* xy, size_t point_count, char** out);
/* Text report of every gesture captured in a replay file. */
GE_API ge_status ge_store_recognize_replay(const ge_store* store, const char* replay_path, ge_path_source source,
                                           char** out);

/* Session service and its socket server. */
typedef struct ge_service ge_service;
typedef struct ge_server ge_server;

/* A NULL store starts from the bundled templates. */
GE_API ge_status ge_service_create(const ge_store* store, ge_service** out);
GE_API void ge_service_free(ge_service* service);
/* One JSON message in; *out is a JSON array of replies. */
GE_API ge_status ge_service_handle(ge_service* service, const char* message_json, char** out);

/* Port 0 binds an ephemeral port; see ge_server_port. A negative port reads
   PURSUIT_PORT (default 7317). */
GE_API ge_status ge_server_start(ge_service* service, const char* host, int port, ge_server** out);
GE_API int ge_server_port(const ge_server* server);
GE_API void ge_server_stop(ge_server* server);
GE_API void ge_server_free(ge_server* server);

/* Replay a file through one session mode. */
typedef struct ge_replay_options {
  const char* mode;          /* arbiter | gesture | auth | typing */
  const ge_store* store;     /* gesture; NULL for bundled */
  ge_path_source source;     /* gesture */
  int64_t double_click_window_ms;
  int64_t hold_threshold_ms;
  uint64_t seed;             /* auth */
  const char* password;      /* auth: comma separated ids; NULL or "" enrolls */
  const char* phrase;        /* typing */
  const char* layout_path;   /* typing; NULL for the default QWERTY layout */
  int via_service;           /* nonzero routes the records through the service */
} ge_replay_options;

GE_API void ge_replay_options_init(ge_replay_options* options);
/* *out holds one JSON event per line. */
GE_API ge_status ge_replay_run(const char* replay_path, const ge_replay_options* options, char** out);

typedef struct ge_auth_sim_options {
  uint64_t seed_base;
  int seeds;
  double noise_px;
  int64_t latency_ms;
  double rate_hz;
  double offset_px;
  int shape_count;
  int password_length;
  int64_t epoch_ms;
  int64_t inter_epoch_ms;
  double accept_margin;
  const char* transcript_dir; /* NULL: no transcript files */
} ge_auth_sim_options;

GE_API void ge_auth_sim_options_init(ge_auth_sim_options* options);
GE_API ge_status ge_auth_sim(const ge_auth_sim_options* options, char** out);

typedef struct ge_type_sim_options {
  const char* phrases_path;
  const char* layout_path;   /* NULL for the default QWERTY layout */
  uint64_t seed;
  double sigma_px;
  double error_rate;
  int64_t keystroke_interval_ms;
  int rba_per_character;     /* nonzero divides backspaces by characters */
} ge_type_sim_options;

GE_API void ge_type_sim_options_init(ge_type_sim_options* options);
GE_API ge_status ge_type_sim(const ge_type_sim_options* options, char** out);

GE_API ge_status ge_bench(uint64_t seed, int gestures, int epochs, char** out);

typedef struct ge_synth_options {
  const char* mode;          /* arbiter | gesture | auth | typing */
  uint64_t seed;
  double noise_px;
  double rate_hz;
  int count;                 /* gestures or arbiter presses */
  const char* password;      /* auth: comma separated ids; NULL or "" draws one */
  const char* phrase;        /* typing */
} ge_synth_options;

GE_API void ge_synth_options_init(ge_synth_options* options);
/* Writes a replay file; *out (optional) receives a one-line description. */
GE_API ge_status ge_synth(const ge_synth_options* options, const char* out_path, char** out);

#ifdef __cplusplus
}
#endif

#endif
