/* Copyright 2026 The FedSCS Authors. All Rights Reserved.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the fedscs library: centralized and federated histogram
 * gradient boosting, run reports and the verification suite.
 *
 * Conventions:
 *  - Every object is an opaque handle created by a *_create / producer call
 *    and released with the matching *_destroy (NULL is accepted).
 *  - Fallible calls return fedscs_status. On failure the message is kept in
 *    thread-local storage, readable through fedscs_last_error_message().
 *  - Strings are returned by copying into (buf, cap). *len receives the
 *    length without the terminator. If cap <= *len nothing is copied and
 *    FEDSCS_ERR_BUFFER_TOO_SMALL is returned, so a NULL/0 call sizes the buffer.
 */
#ifndef FEDSCS_FEDSCS_H_
#define FEDSCS_FEDSCS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(FEDSCS_BUILDING_LIBRARY)
#define FEDSCS_API __attribute__((visibility("default")))
#else
#define FEDSCS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fedscs_status {
  FEDSCS_OK = 0,
  FEDSCS_ERR_INVALID_ARGUMENT = 1, /* NULL handle, bad index, unknown name */
  FEDSCS_ERR_INVALID_INPUT = 2,
  FEDSCS_ERR_EMPTY_SKETCH = 3,
  FEDSCS_ERR_INGEST = 4,
  FEDSCS_ERR_PARTITION = 5,
  FEDSCS_ERR_PROTOCOL = 6,
  FEDSCS_ERR_FRAME = 7,
  FEDSCS_ERR_INVALID_ENDPOINT = 8,
  FEDSCS_ERR_BARRIER_TIMEOUT = 9,
  FEDSCS_ERR_IO = 10,
  FEDSCS_ERR_CONFIG = 11,
  FEDSCS_ERR_BUFFER_TOO_SMALL = 12,
  FEDSCS_ERR_INTERNAL = 13
} fedscs_status;

typedef struct fedscs_config fedscs_config;
typedef struct fedscs_dataset fedscs_dataset;
typedef struct fedscs_ensemble fedscs_ensemble;
typedef struct fedscs_report fedscs_report;
typedef struct fedscs_sweep fedscs_sweep;
typedef struct fedscs_verify_result fedscs_verify_result;

FEDSCS_API const char* fedscs_version(void);
FEDSCS_API const char* fedscs_status_name(fedscs_status status);
/* Message of the last failed call on this thread ("" if none). */
FEDSCS_API const char* fedscs_last_error_message(void);

/* ---- configuration: the key = value settings documented in the README */
FEDSCS_API fedscs_status fedscs_config_create(fedscs_config** out);
FEDSCS_API void fedscs_config_destroy(fedscs_config* config);
FEDSCS_API fedscs_status fedscs_config_set(fedscs_config* config, const char* key,
                                           const char* value);
/* Applies a key = value file on top of the current settings. */
FEDSCS_API fedscs_status fedscs_config_load(fedscs_config* config, const char* path);
FEDSCS_API fedscs_status fedscs_config_get(const fedscs_config* config, const char* key,
                                           char* buf, size_t cap, size_t* len);

/* ---- datasets */
/* id_column may be NULL or "" when the file has none. */
FEDSCS_API fedscs_status fedscs_dataset_load_csv(const char* path, const char* label_column,
                                                 const char* id_column, fedscs_dataset** out);
/* Gaussian blobs from the synth_* and seed settings of `config`. */
FEDSCS_API fedscs_status fedscs_dataset_generate_blobs(const fedscs_config* config,
                                                       fedscs_dataset** out);
/* Writes features, an "id" column and a "label" column. */
FEDSCS_API fedscs_status fedscs_dataset_write_csv(const fedscs_dataset* dataset, const char* path);
FEDSCS_API void fedscs_dataset_destroy(fedscs_dataset* dataset);
FEDSCS_API size_t fedscs_dataset_rows(const fedscs_dataset* dataset);
FEDSCS_API size_t fedscs_dataset_features(const fedscs_dataset* dataset);
FEDSCS_API size_t fedscs_dataset_classes(const fedscs_dataset* dataset);
/* Dense label of each row, 0..classes-1. `cap` below rows gives FEDSCS_ERR_BUFFER_TOO_SMALL. */
FEDSCS_API fedscs_status fedscs_dataset_labels(const fedscs_dataset* dataset, int32_t* out,
                                               size_t cap);

/* ---- models */
/* Trains the centralized engine on every row of `dataset`. */
FEDSCS_API fedscs_status fedscs_train_central(const fedscs_config* config,
                                              const fedscs_dataset* dataset,
                                              fedscs_ensemble** out);
FEDSCS_API void fedscs_ensemble_destroy(fedscs_ensemble* ensemble);
FEDSCS_API size_t fedscs_ensemble_rounds(const fedscs_ensemble* ensemble);
/* Predicted class per row. `cap` below rows gives FEDSCS_ERR_BUFFER_TOO_SMALL. */
FEDSCS_API fedscs_status fedscs_ensemble_predict(const fedscs_ensemble* ensemble,
                                                 const fedscs_dataset* dataset, int32_t* out,
                                                 size_t cap);

/* ---- runs: data loading, split, training (central or federated), metrics */
FEDSCS_API fedscs_status fedscs_run(const fedscs_config* config, fedscs_report** out);
FEDSCS_API void fedscs_report_destroy(fedscs_report* report);
/* objective.csv, metrics.csv and summary.csv in `dir`. */
FEDSCS_API fedscs_status fedscs_report_write(const fedscs_report* report, const char* dir);
FEDSCS_API fedscs_status fedscs_report_format(const fedscs_report* report, char* buf, size_t cap,
                                              size_t* len);
FEDSCS_API double fedscs_report_max_gap(const fedscs_report* report);
/* Number of objective values (rounds + 1). */
FEDSCS_API size_t fedscs_report_objective_count(const fedscs_report* report);
/* engine: "central" or "fed". Unknown values are NaN. */
FEDSCS_API fedscs_status fedscs_report_objective(const fedscs_report* report, const char* engine,
                                                 size_t t, double* out);
/* client NULL or "" selects the pooled slice. */
FEDSCS_API fedscs_status fedscs_report_metric(const fedscs_report* report, const char* engine,
                                              const char* split, const char* client,
                                              double* accuracy, double* macro_f1);
FEDSCS_API fedscs_status fedscs_report_tree_diff(const fedscs_report* report, char* buf,
                                                 size_t cap, size_t* len);

/* ---- sweeps: one federated run per value of "bins" or "rho" (>= 2 values) */
FEDSCS_API fedscs_status fedscs_sweep_run(const fedscs_config* config, const char* axis,
                                          const char* const* values, size_t n_values,
                                          fedscs_sweep** out);
FEDSCS_API void fedscs_sweep_destroy(fedscs_sweep* sweep);
FEDSCS_API fedscs_status fedscs_sweep_write(const fedscs_sweep* sweep, const char* dir);
FEDSCS_API fedscs_status fedscs_sweep_format(const fedscs_sweep* sweep, char* buf, size_t cap,
                                             size_t* len);
FEDSCS_API double fedscs_sweep_max_gap(const fedscs_sweep* sweep, size_t i);

/* ---- verification suite */
FEDSCS_API fedscs_status fedscs_verify(const fedscs_config* config, fedscs_verify_result** out);
FEDSCS_API void fedscs_verify_destroy(fedscs_verify_result* result);
FEDSCS_API int fedscs_verify_passed(const fedscs_verify_result* result);
FEDSCS_API size_t fedscs_verify_count(const fedscs_verify_result* result);
FEDSCS_API fedscs_status fedscs_verify_item(const fedscs_verify_result* result, size_t i,
                                            int* passed, char* name, size_t cap, size_t* len);
FEDSCS_API fedscs_status fedscs_verify_format(const fedscs_verify_result* result, char* buf,
                                              size_t cap, size_t* len);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FEDSCS_FEDSCS_H_ */
