// Copyright 2026 The fracsed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the fracsed experiment library.
 *
 * Every function returns a fracsed_status. On failure the thread-local
 * message from fracsed_last_error() describes the problem and output handles
 * are set to NULL. Handles are opaque and owned by the caller; release them
 * with the matching *_free function (NULL is accepted). Strings and arrays
 * returned through handles stay valid until the handle is freed.
 */
#ifndef FRACSED_FRACSED_H
#define FRACSED_FRACSED_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FRACSED_BUILDING_LIBRARY)
#    define FRACSED_API __declspec(dllexport)
#  else
#    define FRACSED_API __declspec(dllimport)
#  endif
#else
#  define FRACSED_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fracsed_status {
  FRACSED_OK = 0,
  FRACSED_ERR_VALIDATION = 1, /* bad config value or argument domain */
  FRACSED_ERR_DIVERGENCE = 2, /* non-finite iterate, loss or gradient */
  FRACSED_ERR_IO = 3,         /* unreadable/unwritable file or malformed file content */
  FRACSED_ERR_NUMERICAL = 4,  /* eigen-solver or simulation failure */
  FRACSED_ERR_ARGUMENT = 5,   /* NULL handle, bad index, unknown key */
  FRACSED_ERR_INTERNAL = 6
} fracsed_status;

typedef struct fracsed_config fracsed_config;
typedef struct fracsed_result fracsed_result;
typedef struct fracsed_sweep fracsed_sweep;

typedef struct fracsed_rate_fit_result {
  double slope;
  double intercept;
  double r_squared;
} fracsed_rate_fit_result;

typedef struct fracsed_aggregate {
  size_t count;
  double mean;
  double median;
  double q25;
  double q75;
  double iqr;
} fracsed_aggregate;

FRACSED_API const char* fracsed_version(void);
FRACSED_API const char* fracsed_status_string(fracsed_status status);
/* Message for the last failed call on this thread ("" if none). */
FRACSED_API const char* fracsed_last_error(void);

/* ---- configuration ---- */

/* Default configuration. */
FRACSED_API fracsed_status fracsed_config_new(fracsed_config** out);
FRACSED_API fracsed_status fracsed_config_load(const char* path, fracsed_config** out);
FRACSED_API fracsed_status fracsed_config_parse(const char* text, fracsed_config** out);
FRACSED_API fracsed_status fracsed_config_set(fracsed_config* cfg, const char* key,
                                              const char* value);
/* Copies the value into buf (NUL-terminated, truncated to cap). *needed, if
 * given, receives the full length including the terminator. */
FRACSED_API fracsed_status fracsed_config_get(const fracsed_config* cfg, const char* key,
                                              char* buf, size_t cap, size_t* needed);
FRACSED_API fracsed_status fracsed_config_validate(const fracsed_config* cfg);
FRACSED_API fracsed_status fracsed_config_to_text(const fracsed_config* cfg, char* buf,
                                                  size_t cap, size_t* needed);
FRACSED_API void fracsed_config_free(fracsed_config* cfg);

/* ---- single run ---- */

/* csv_path overrides the config's output key when non-NULL. */
FRACSED_API fracsed_status fracsed_run(const fracsed_config* cfg, const char* csv_path,
                                       fracsed_result** out);
FRACSED_API fracsed_status fracsed_result_value(const fracsed_result* res, const char* key,
                                                double* value);
FRACSED_API size_t fracsed_result_key_count(const fracsed_result* res);
FRACSED_API const char* fracsed_result_key(const fracsed_result* res, size_t index);
FRACSED_API size_t fracsed_result_trace_length(const fracsed_result* res);
FRACSED_API size_t fracsed_result_column_count(const fracsed_result* res);
FRACSED_API const char* fracsed_result_column_name(const fracsed_result* res, size_t index);
FRACSED_API fracsed_status fracsed_result_trace_column(const fracsed_result* res,
                                                       const char* name, const double** data,
                                                       size_t* length);
FRACSED_API size_t fracsed_result_param_layers(const fracsed_result* res);
FRACSED_API fracsed_status fracsed_result_params(const fracsed_result* res, size_t layer,
                                                 const double** data, size_t* length);
FRACSED_API fracsed_status fracsed_result_write_summary(const fracsed_result* res,
                                                        const char* path);
FRACSED_API void fracsed_result_free(fracsed_result* res);

/* ---- seed sweeps ---- */

/* Runs `seeds` seeds derived from the config seed on `threads` workers (0 =
 * all cores). Individual failures are recorded, not returned. track_column,
 * if non-NULL, names a trace column averaged over successful seeds. */
FRACSED_API fracsed_status fracsed_sweep_run(const fracsed_config* cfg, size_t seeds,
                                             size_t threads, const char* track_column,
                                             fracsed_sweep** out);
FRACSED_API size_t fracsed_sweep_seed_count(const fracsed_sweep* sw);
FRACSED_API size_t fracsed_sweep_failures(const fracsed_sweep* sw);
FRACSED_API fracsed_status fracsed_sweep_seed(const fracsed_sweep* sw, size_t index,
                                              uint64_t* seed, int* ok);
/* Error message of a failed seed, "" for a successful one, NULL on bad index. */
FRACSED_API const char* fracsed_sweep_seed_error(const fracsed_sweep* sw, size_t index);
FRACSED_API fracsed_status fracsed_sweep_seed_value(const fracsed_sweep* sw, size_t index,
                                                    const char* key, double* value);
FRACSED_API size_t fracsed_sweep_aggregate_count(const fracsed_sweep* sw);
FRACSED_API const char* fracsed_sweep_aggregate_key(const fracsed_sweep* sw, size_t index);
FRACSED_API fracsed_status fracsed_sweep_aggregate(const fracsed_sweep* sw, const char* key,
                                                   fracsed_aggregate* out);
FRACSED_API fracsed_status fracsed_sweep_tracked_mean(const fracsed_sweep* sw,
                                                      const double** data, size_t* length);
/* Rate fit of the running minimum of the tracked mean. */
FRACSED_API fracsed_status fracsed_sweep_rate_fit(const fracsed_sweep* sw,
                                                  fracsed_rate_fit_result* out);
FRACSED_API fracsed_status fracsed_sweep_write_summary(const fracsed_sweep* sw,
                                                       const char* path);
FRACSED_API void fracsed_sweep_free(fracsed_sweep* sw);

/* ---- rate fits ---- */

/* Fits log(series) against log(t) on the last 90% of the series. With
 * running_min != 0 the running minimum is fitted instead of the raw values. */
FRACSED_API fracsed_status fracsed_rate_fit(const double* series, size_t length, int running_min,
                                            fracsed_rate_fit_result* out);
FRACSED_API fracsed_status fracsed_rate_fit_csv(const char* path, const char* column,
                                                int running_min, fracsed_rate_fit_result* out);

#ifdef __cplusplus
}
#endif

#endif /* FRACSED_FRACSED_H */
