// Copyright 2026 The Unicycle Lab Authors
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

#ifndef UNICYCLE_UNICYCLE_H_
#define UNICYCLE_UNICYCLE_H_

/* C interface to the unicycle planning, control and simulation library.
 *
 * Every fallible call returns a uc_status. On failure a description is
 * available from uc_last_error() on the calling thread until its next call
 * into the library. Handles are opaque and released by their *_free
 * function; passing NULL to a *_free function is allowed. Handles may be
 * used from several threads as long as no thread mutates a shared one. */

#include <stddef.h>

#if defined(_WIN32)
#define UC_API __declspec(dllexport)
#else
#define UC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uc_status {
  UC_OK = 0,
  UC_INVALID_ARGUMENT = 1,
  UC_NON_POSITIVE_LENGTH = 2,
  UC_NO_SOLUTION = 3,
  UC_DEGENERATE = 4,
  UC_ZERO_SPEED_PAIR = 5,
  UC_OUT_OF_RANGE = 6,
  UC_DISCONTINUOUS_CHAIN = 7,
  UC_TILT_SINGULAR = 8,
  UC_PATH_SINGULAR = 9,
  UC_LIFT_OFF = 10,
  UC_NO_OSCILLATORY_BAND = 11,
  UC_PLACEMENT_SINGULAR = 12,
  UC_UNSTABLE_RESIDUAL_POLE = 13,
  UC_FELL = 14,
  UC_EMPTY_TRACE = 15,
  UC_CONFIG = 16,
  UC_IO = 17,
  UC_INTERNAL = 18
} uc_status;

UC_API const char* uc_version(void);
/* Symbolic name such as "LiftOff"; "Unknown" for out-of-range values. */
UC_API const char* uc_status_name(uc_status status);
/* Message of the last failed call on this thread, "" after a success. */
UC_API const char* uc_last_error(void);
/* Process exit status for a command outcome: 0 ok, 1 configuration or
 * usage, 2 fall, 3 lift-off, 4 solver, I/O and other failures. */
UC_API int uc_exit_code(uc_status status);

/* ---- physical parameters (SI) ---- */

typedef struct uc_params {
  double m;  /* wheel mass */
  double m1; /* lateral mass */
  double m2; /* pendulum mass */
  double h;  /* pendulum length */
  double R;  /* wheel radius */
  double g;
} uc_params;

UC_API void uc_params_default(uc_params* out);

/* Critical wheel-centre speeds v1 < v2 < v3 in m/s. */
UC_API uc_status uc_critical_speeds(const uc_params* p, double out[3]);
/* Positive longitudinal open-loop root in 1/s. */
UC_API uc_status uc_longitudinal_root(const uc_params* p, double* out);
/* Nonzero lateral open-loop roots at pitch rate phidot (rad/s). */
UC_API uc_status uc_lateral_roots(const uc_params* p, double phidot, double re[4],
                                  double im[4]);

/* Closed-loop gains at pitch rate phidot for the given (negative) pole.
 * lateral = [D_theta, D_r, P_r, P_theta, P_chi, P_eps],
 * longitudinal = [D_phi, D_gamma, P_gamma, P_s]; beta is the residual
 * lateral pole. Any output pointer may be NULL. */
UC_API uc_status uc_synthesize_gains(const uc_params* p, double phidot, double pole,
                                     double lateral[6], double longitudinal[4],
                                     double* beta);

/* ---- run configuration ---- */

typedef struct uc_config uc_config;

UC_API uc_status uc_config_default(uc_config** out);
/* Strict JSON; errors carry "<path>:<line>:". */
UC_API uc_status uc_config_load(const char* path, uc_config** out);
UC_API uc_status uc_config_parse(const char* text, const char* source, uc_config** out);
UC_API uc_status uc_config_clone(const uc_config* config, uc_config** out);
UC_API void uc_config_free(uc_config* config);

UC_API uc_status uc_config_get_params(const uc_config* config, uc_params* out);
UC_API uc_status uc_config_set_params(uc_config* config, const uc_params* params);
UC_API uc_status uc_config_set_out_dir(uc_config* config, const char* dir);
UC_API uc_status uc_config_set_dt(uc_config* config, double dt);
UC_API uc_status uc_config_set_fall_threshold(uc_config* config, double rad);
UC_API uc_status uc_config_set_svg(uc_config* config, int enabled);
UC_API uc_status uc_config_set_threads(uc_config* config, int threads);
/* Grid specs "a:b:step" or "a,b,c". An empty spec gives an empty list,
 * which the sweep command rejects. */
UC_API uc_status uc_config_set_sweep_ratios(uc_config* config, const char* spec);
UC_API uc_status uc_config_set_sweep_speeds(uc_config* config, const char* spec);
UC_API uc_status uc_config_set_plan_ratios(uc_config* config, const char* spec);
/* Plan JSON consumed by the simulate command; NULL or "" clears it. */
UC_API uc_status uc_config_set_plan_file(uc_config* config, const char* path);

/* ---- plans ---- */

typedef struct uc_plan uc_plan;

/* Plans the configured maneuver. */
UC_API uc_status uc_plan_build(const uc_config* config, uc_plan** out);
UC_API uc_status uc_plan_load(const char* path, uc_plan** out);
UC_API uc_status uc_plan_save(const uc_plan* plan, const char* path);
UC_API void uc_plan_free(uc_plan* plan);
UC_API double uc_plan_length(const uc_plan* plan);
UC_API double uc_plan_duration(const uc_plan* plan);
UC_API size_t uc_plan_segment_count(const uc_plan* plan);
UC_API uc_status uc_plan_curvature_at(const uc_plan* plan, double s, double* out);

/* ---- simulation ---- */

typedef struct uc_metrics {
  double max_abs_tilt;
  double max_abs_gamma;
  double max_abs_r;
  double max_abs_F;
  double max_abs_T;
  double mu_required;
  double max_abs_P_F;
  double max_abs_P_T;
  int fell;
  double final_eps;
  double final_chi;
  double energy_drift;
  double end_time;
} uc_metrics;

/* Closed-loop run of `plan` with the parameters and simulator settings of
 * `config`. Returns the run outcome; metrics are filled in either way. */
UC_API uc_status uc_simulate(const uc_plan* plan, const uc_config* config,
                             uc_metrics* out);

/* ---- commands ---- */

typedef struct uc_result uc_result;

/* Each command writes its files under the configured output directory and
 * returns its outcome. *out receives a result handle (also on failure)
 * holding the summary text and the written paths; out may be NULL. */
UC_API uc_status uc_cmd_analyze(const uc_config* config, uc_result** out);
UC_API uc_status uc_cmd_plan(const uc_config* config, uc_result** out);
UC_API uc_status uc_cmd_simulate(const uc_config* config, uc_result** out);
UC_API uc_status uc_cmd_sweep(const uc_config* config, uc_result** out);

UC_API uc_status uc_result_status(const uc_result* result);
UC_API const char* uc_result_summary(const uc_result* result);
UC_API size_t uc_result_file_count(const uc_result* result);
/* NULL when index is out of range. */
UC_API const char* uc_result_file(const uc_result* result, size_t index);
UC_API void uc_result_free(uc_result* result);

#ifdef __cplusplus
}
#endif

#endif /* UNICYCLE_UNICYCLE_H_ */
