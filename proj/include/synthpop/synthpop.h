// Copyright 2026 The synthpop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface of the synthetic population toolkit.
 *
 * Every function that can fail returns an sp_status. On failure a message is
 * kept per thread and can be read with sp_last_error() until the next failing
 * call on the same thread. Handles are opaque and must be released with the
 * matching *_free function; passing NULL to a *_free function is allowed.
 */
#ifndef SYNTHPOP_SYNTHPOP_H
#define SYNTHPOP_SYNTHPOP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SYNTHPOP_BUILDING_LIBRARY)
#define SP_API __declspec(dllexport)
#else
#define SP_API __declspec(dllimport)
#endif
#else
#define SP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sp_status {
  SP_OK = 0,
  SP_ERR_INPUT = 1,     /* bad or missing input: files, keys, columns */
  SP_ERR_PIPELINE = 2,  /* inputs parsed but a stage could not complete */
  SP_ERR_ARGUMENT = 3,  /* invalid argument to this API (NULL handle, ...) */
  SP_ERR_INTERNAL = 4   /* unexpected failure */
} sp_status;

/* Subcommand masks used by the schema accessors. */
enum {
  SP_CMD_GENERATE = 1,
  SP_CMD_EVALUATE = 2,
  SP_CMD_SIMULATE = 4
};

typedef struct sp_config sp_config;
typedef struct sp_polygon sp_polygon;

SP_API const char* sp_version(void);
SP_API const char* sp_last_error(void);
SP_API const char* sp_status_name(sp_status status);

/* 0 error, 1 warn, 2 info, 3 debug; messages go to stderr. */
SP_API void sp_set_log_level(int level);

/* ---- configuration ---------------------------------------------------- */

SP_API sp_status sp_config_new(sp_config** out);
SP_API sp_status sp_config_load(const char* path, sp_config** out);
SP_API void sp_config_free(sp_config* config);
/* Applies "key=value"; relative paths resolve against the working directory. */
SP_API sp_status sp_config_override(sp_config* config, const char* assignment);
SP_API sp_status sp_config_set(sp_config* config, const char* key, const char* value);
/*
 * Copies the effective value (default if unset) of key into buf, including
 * the terminating NUL. *needed receives the required size; buf may be NULL to
 * query it.
 */
SP_API sp_status sp_config_get(const sp_config* config, const char* key, char* buf, size_t buf_size,
                               size_t* needed);

/* ---- schema ----------------------------------------------------------- */

SP_API size_t sp_schema_size(void);
SP_API const char* sp_schema_key(size_t index);
SP_API const char* sp_schema_type(size_t index);
SP_API const char* sp_schema_default(size_t index);
SP_API const char* sp_schema_description(size_t index);
SP_API unsigned sp_schema_commands(size_t index);
/* Help text listing every key read by the given commands. Valid until the
 * next call on the same thread. */
SP_API const char* sp_schema_help(unsigned commands);

/* ---- pipelines -------------------------------------------------------- */

typedef struct sp_generate_summary {
  uint64_t target_persons;
  uint64_t persons;
  uint64_t households;
  uint64_t workplaces;
  uint64_t schools;
  uint64_t public_places;
  double ipu_fit_delta;
  int ipu_iterations;
  int ipu_converged;
} sp_generate_summary;

/* Writes population.csv, locations.csv, attribute_model.json and
 * provenance.json into output.dir. summary may be NULL. */
SP_API sp_status sp_generate(const sp_config* config, sp_generate_summary* summary);

typedef struct sp_evaluate_summary {
  uint64_t real_rows;
  uint64_t synth_rows;
  double min_ks_score;
  double min_chi2_pvalue;
  double max_efficacy_gap;
} sp_evaluate_summary;

/* Writes report.txt and plot data into output.dir. summary may be NULL. */
SP_API sp_status sp_evaluate(const sp_config* config, sp_evaluate_summary* summary);

/* Runs one ensemble per lockdown threshold. *scenarios (may be NULL)
 * receives the number of threshold values simulated. */
SP_API sp_status sp_simulate(const sp_config* config, size_t* scenarios);

typedef struct sp_fixture_summary {
  uint64_t households;
  uint64_t persons;
  uint64_t grid_cells;
  double scale;
} sp_fixture_summary;

/* Writes the bundled desk-scale input set and its configs into out_dir. */
SP_API sp_status sp_fixtures(const char* out_dir, sp_fixture_summary* summary);

/* ---- helpers ---------------------------------------------------------- */

SP_API sp_status sp_polygon_load(const char* geojson_path, sp_polygon** out);
SP_API sp_status sp_polygon_parse(const char* geojson_text, sp_polygon** out);
SP_API void sp_polygon_free(sp_polygon* polygon);
SP_API sp_status sp_polygon_contains(const sp_polygon* polygon, double lat, double lon, int* inside);

/* 1 - two-sample Kolmogorov-Smirnov statistic. */
SP_API sp_status sp_ks_score(const double* real, size_t n_real, const double* synth, size_t n_synth, double* score);
/* Chi-square goodness-of-fit p-value of synth against real proportions. */
SP_API sp_status sp_chi_square_pvalue(const char* const* real, size_t n_real, const char* const* synth,
                                      size_t n_synth, double* p_value);

#ifdef __cplusplus
}
#endif

#endif /* SYNTHPOP_SYNTHPOP_H */
