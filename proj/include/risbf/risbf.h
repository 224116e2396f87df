/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * risbf - hybrid beamforming and RIS phase design for mmWave downlinks
 * Copyright (C) 2026 The risbf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the risbf library.
 *
 * Every object is an opaque handle created by a *_new / *_load / *_generate /
 * *_run function and released with the matching *_free function (which
 * accepts NULL). Functions return a risbf_status; on failure a description is
 * available from risbf_last_error() until the next failing call on the same
 * thread.
 */

#ifndef RISBF_H
#define RISBF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RISBF_BUILDING_LIBRARY)
#    define RISBF_API __declspec(dllexport)
#  else
#    define RISBF_API __declspec(dllimport)
#  endif
#else
#  define RISBF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum risbf_status {
    RISBF_OK = 0,
    RISBF_ERR_INVALID_ARGUMENT = 1, /* bad config, bad key, bad dimensions, NULL handle */
    RISBF_ERR_IO = 2,               /* file could not be read or written */
    RISBF_ERR_INFEASIBLE = 3,       /* SINR targets unreachable for the given channels */
    RISBF_ERR_NUMERICAL = 4,        /* non-finite values or a failed inner solve */
    RISBF_ERR_INTERNAL = 5
} risbf_status;

typedef enum risbf_variant {
    RISBF_VARIANT_PENALTY_HYBRID = 0,
    RISBF_VARIANT_PENALTY_FULLY_DIGITAL = 1,
    RISBF_VARIANT_RANDOM_THETA = 2,
    RISBF_VARIANT_MAXMIN_THETA_JOINT_WV = 3,
    RISBF_VARIANT_INDIVIDUAL = 4
} risbf_variant;

typedef struct risbf_config risbf_config;
typedef struct risbf_channels risbf_channels;
typedef struct risbf_solution risbf_solution;
typedef struct risbf_sweep risbf_sweep;

typedef struct risbf_solution_summary {
    double power_dbm;
    double min_sinr_db;
    int converged;           /* penalty variants: stopping indicator below eps2 */
    size_t outer_iters;
} risbf_solution_summary;

typedef struct risbf_sweep_spec {
    const char *kind;        /* "sinr", "elements", "distance" or "convergence" */
    const double *values;    /* sorted sweep points */
    size_t num_values;
    size_t realizations;
    const char *variants;    /* comma-separated variant names */
    uint64_t seed;
    size_t threads;          /* 0 = hardware concurrency */
    int record_timing;       /* non-zero fills wall_ms (output is then not reproducible) */
} risbf_sweep_spec;

typedef struct risbf_result_row {
    const char *variant;     /* static string, valid for the life of the process */
    double sweep_value;
    size_t realization;
    double power_dbm;
    int converged;
    double min_sinr_db;
    size_t outer_iters;
    double wall_ms;
} risbf_result_row;

RISBF_API const char *risbf_version(void);
RISBF_API const char *risbf_last_error(void);
RISBF_API const char *risbf_status_string(risbf_status status);

/* Configuration. New configs start from the reduced desk-scale scenario. */
RISBF_API risbf_status risbf_config_new(risbf_config **out);
RISBF_API risbf_status risbf_config_load(const char *path, risbf_config **out);
RISBF_API risbf_status risbf_config_set(risbf_config *cfg, const char *key, const char *value);
RISBF_API risbf_status risbf_config_validate(const risbf_config *cfg);
RISBF_API risbf_status risbf_config_get_seed(const risbf_config *cfg, uint64_t *seed);
RISBF_API void risbf_config_free(risbf_config *cfg);

/* One channel realization, a pure function of (config, seed). */
RISBF_API risbf_status risbf_channels_generate(const risbf_config *cfg, uint64_t seed, risbf_channels **out);
RISBF_API risbf_status risbf_channels_dims(const risbf_channels *ch, size_t *elements, size_t *antennas, size_t *users);
RISBF_API void risbf_channels_free(risbf_channels *ch);

/* Solve one realization with a solver variant. Infeasible instances return
 * RISBF_ERR_INFEASIBLE and leave *out NULL. */
RISBF_API risbf_status risbf_solve(const risbf_config *cfg, const risbf_channels *ch, risbf_variant variant,
                                   uint64_t seed, risbf_solution **out);
RISBF_API risbf_status risbf_solution_summary_get(const risbf_solution *sol, risbf_solution_summary *out);
/* Per-user SINR in dB; sinr_db must hold `users` entries. */
RISBF_API risbf_status risbf_solution_sinr_db(const risbf_solution *sol, double *sinr_db, size_t users);
RISBF_API risbf_status risbf_solution_write_trace(const risbf_solution *sol, const char *path);
RISBF_API void risbf_solution_free(risbf_solution *sol);

/* Monte Carlo sweeps. Rows are ordered by (sweep point, realization, variant). */
RISBF_API risbf_status risbf_sweep_run(const risbf_config *cfg, const risbf_sweep_spec *spec, risbf_sweep **out);
RISBF_API size_t risbf_sweep_row_count(const risbf_sweep *sweep);
RISBF_API risbf_status risbf_sweep_row(const risbf_sweep *sweep, size_t index, risbf_result_row *out);
RISBF_API risbf_status risbf_sweep_write_csv(const risbf_sweep *sweep, const char *path);
RISBF_API risbf_status risbf_sweep_write_trace(const risbf_sweep *sweep, const char *path);
RISBF_API void risbf_sweep_free(risbf_sweep *sweep);

#ifdef __cplusplus
}
#endif

#endif
