// Copyright 2026 The FedSCS Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedscs/fedscs.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "data/csv.hpp"
#include "data/synth.hpp"
#include "eval/runner.hpp"
#include "eval/verify.hpp"
#include "gbt/train.hpp"

struct fedscs_config {
  fedscs::eval::RunConfig config;
};
struct fedscs_dataset {
  fedscs::data::Table table;
};
struct fedscs_ensemble {
  fedscs::gbt::Ensemble ensemble;
};
struct fedscs_report {
  fedscs::eval::RunReport report;
};
struct fedscs_sweep {
  fedscs::eval::SweepOutcome sweep;
};
struct fedscs_verify_result {
  fedscs::eval::VerifyReport report;
};

namespace {

thread_local std::string g_last_error;

fedscs_status to_status(fedscs::ErrorCode code) {
  using fedscs::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidInput: return FEDSCS_ERR_INVALID_INPUT;
    case ErrorCode::kEmptySketch: return FEDSCS_ERR_EMPTY_SKETCH;
    case ErrorCode::kIngest: return FEDSCS_ERR_INGEST;
    case ErrorCode::kPartition: return FEDSCS_ERR_PARTITION;
    case ErrorCode::kProtocol: return FEDSCS_ERR_PROTOCOL;
    case ErrorCode::kFrame: return FEDSCS_ERR_FRAME;
    case ErrorCode::kInvalidEndpoint: return FEDSCS_ERR_INVALID_ENDPOINT;
    case ErrorCode::kBarrierTimeout: return FEDSCS_ERR_BARRIER_TIMEOUT;
    case ErrorCode::kIo: return FEDSCS_ERR_IO;
    case ErrorCode::kConfig: return FEDSCS_ERR_CONFIG;
  }
  return FEDSCS_ERR_INTERNAL;
}

fedscs_status set_error(fedscs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `fn`, mapping exceptions to status codes.
template <typename Fn>
fedscs_status guard(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const fedscs::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(FEDSCS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(FEDSCS_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(FEDSCS_ERR_INTERNAL, "unknown exception");
  }
}

fedscs_status missing(const char* what) {
  return set_error(FEDSCS_ERR_INVALID_ARGUMENT, std::string(what) + " is NULL");
}

fedscs_status copy_out(const std::string& s, char* buf, size_t cap, size_t* len) {
  if (len) *len = s.size();
  if (!buf || cap <= s.size()) {
    return set_error(FEDSCS_ERR_BUFFER_TOO_SMALL,
                     "buffer needs " + std::to_string(s.size() + 1) + " bytes");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return FEDSCS_OK;
}

}  // namespace

extern "C" {

const char* fedscs_version(void) { return "0.1.0"; }

const char* fedscs_status_name(fedscs_status status) {
  switch (status) {
    case FEDSCS_OK: return "OK";
    case FEDSCS_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case FEDSCS_ERR_INVALID_INPUT: return "InvalidInput";
    case FEDSCS_ERR_EMPTY_SKETCH: return "EmptySketch";
    case FEDSCS_ERR_INGEST: return "IngestError";
    case FEDSCS_ERR_PARTITION: return "PartitionError";
    case FEDSCS_ERR_PROTOCOL: return "ProtocolError";
    case FEDSCS_ERR_FRAME: return "FrameError";
    case FEDSCS_ERR_INVALID_ENDPOINT: return "InvalidEndpoint";
    case FEDSCS_ERR_BARRIER_TIMEOUT: return "BarrierTimeout";
    case FEDSCS_ERR_IO: return "IoError";
    case FEDSCS_ERR_CONFIG: return "ConfigError";
    case FEDSCS_ERR_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case FEDSCS_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

const char* fedscs_last_error_message(void) { return g_last_error.c_str(); }

// ---- configuration

fedscs_status fedscs_config_create(fedscs_config** out) {
  if (!out) return missing("out");
  return guard([&] {
    *out = new fedscs_config();
    return FEDSCS_OK;
  });
}

void fedscs_config_destroy(fedscs_config* config) { delete config; }

fedscs_status fedscs_config_set(fedscs_config* config, const char* key, const char* value) {
  if (!config) return missing("config");
  if (!key || !value) return missing("key/value");
  return guard([&] {
    config->config.set(key, value);
    return FEDSCS_OK;
  });
}

fedscs_status fedscs_config_load(fedscs_config* config, const char* path) {
  if (!config) return missing("config");
  if (!path) return missing("path");
  return guard([&] {
    fedscs::eval::apply_config_file(config->config, path);
    return FEDSCS_OK;
  });
}

fedscs_status fedscs_config_get(const fedscs_config* config, const char* key, char* buf,
                                size_t cap, size_t* len) {
  if (!config) return missing("config");
  if (!key) return missing("key");
  return guard([&] {
    for (const auto& [k, v] : config->config.echo()) {
      if (k == key) return copy_out(v, buf, cap, len);
    }
    if (std::strcmp(key, "out") == 0) return copy_out(config->config.out, buf, cap, len);
    return set_error(FEDSCS_ERR_INVALID_ARGUMENT, std::string("unknown config key '") + key + "'");
  });
}

// ---- datasets

fedscs_status fedscs_dataset_load_csv(const char* path, const char* label_column,
                                      const char* id_column, fedscs_dataset** out) {
  if (!path) return missing("path");
  if (!out) return missing("out");
  return guard([&] {
    fedscs::data::CsvSchema schema;
    if (label_column && *label_column) schema.label_column = label_column;
    if (id_column) schema.id_column = id_column;
    auto* d = new fedscs_dataset{fedscs::data::load_csv(path, schema)};
    *out = d;
    return FEDSCS_OK;
  });
}

fedscs_status fedscs_dataset_generate_blobs(const fedscs_config* config, fedscs_dataset** out) {
  if (!config) return missing("config");
  if (!out) return missing("out");
  return guard([&] {
    fedscs::data::BlobSpec spec = config->config.synth;
    spec.seed = config->config.train.seed;
    *out = new fedscs_dataset{fedscs::data::make_blobs(spec)};
    return FEDSCS_OK;
  });
}

fedscs_status fedscs_dataset_write_csv(const fedscs_dataset* dataset, const char* path) {
  if (!dataset) return missing("dataset");
  if (!path) return missing("path");
  return guard([&] {
    fedscs::data::CsvSchema schema;
    schema.id_column = dataset->table.has_ids() ? "id" : "";
    fedscs::data::write_csv(path, dataset->table, schema);
    return FEDSCS_OK;
  });
}

void fedscs_dataset_destroy(fedscs_dataset* dataset) { delete dataset; }

size_t fedscs_dataset_rows(const fedscs_dataset* dataset) {
  return dataset ? dataset->table.data.n_rows() : 0;
}

size_t fedscs_dataset_features(const fedscs_dataset* dataset) {
  return dataset ? dataset->table.data.n_features() : 0;
}

size_t fedscs_dataset_classes(const fedscs_dataset* dataset) {
  return dataset ? static_cast<size_t>(dataset->table.data.n_classes) : 0;
}

fedscs_status fedscs_dataset_labels(const fedscs_dataset* dataset, int32_t* out, size_t cap) {
  if (!dataset) return missing("dataset");
  if (!out) return missing("out");
  const auto& labels = dataset->table.data.labels;
  if (cap < labels.size()) return set_error(FEDSCS_ERR_BUFFER_TOO_SMALL, "label buffer too small");
  std::memcpy(out, labels.data(), labels.size() * sizeof(int32_t));
  return FEDSCS_OK;
}

// ---- models

fedscs_status fedscs_train_central(const fedscs_config* config, const fedscs_dataset* dataset,
                                   fedscs_ensemble** out) {
  if (!config) return missing("config");
  if (!dataset) return missing("dataset");
  if (!out) return missing("out");
  return guard([&] {
    auto run = fedscs::gbt::train_central(dataset->table.data, config->config.train);
    *out = new fedscs_ensemble{std::move(run.ensemble)};
    return FEDSCS_OK;
  });
}

void fedscs_ensemble_destroy(fedscs_ensemble* ensemble) { delete ensemble; }

size_t fedscs_ensemble_rounds(const fedscs_ensemble* ensemble) {
  return ensemble ? ensemble->ensemble.rounds.size() : 0;
}

fedscs_status fedscs_ensemble_predict(const fedscs_ensemble* ensemble,
                                      const fedscs_dataset* dataset, int32_t* out, size_t cap) {
  if (!ensemble) return missing("ensemble");
  if (!dataset) return missing("dataset");
  if (!out) return missing("out");
  return guard([&] {
    if (cap < dataset->table.data.n_rows()) {
      return set_error(FEDSCS_ERR_BUFFER_TOO_SMALL, "prediction buffer too small");
    }
    if (dataset->table.data.n_classes > ensemble->ensemble.n_classes) {
      return set_error(FEDSCS_ERR_INVALID_INPUT, "dataset has more classes than the model");
    }
    const auto margins = fedscs::gbt::predict_margins(ensemble->ensemble, dataset->table.data);
    const auto labels = fedscs::gbt::predict_labels(margins);
    std::memcpy(out, labels.data(), labels.size() * sizeof(int32_t));
    return FEDSCS_OK;
  });
}

// ---- runs

fedscs_status fedscs_run(const fedscs_config* config, fedscs_report** out) {
  if (!config) return missing("config");
  if (!out) return missing("out");
  return guard([&] {
    *out = new fedscs_report{fedscs::eval::run(config->config).report};
    return FEDSCS_OK;
  });
}

void fedscs_report_destroy(fedscs_report* report) { delete report; }

fedscs_status fedscs_report_write(const fedscs_report* report, const char* dir) {
  if (!report) return missing("report");
  if (!dir) return missing("dir");
  return guard([&] {
    fedscs::eval::write_report(report->report, dir);
    return FEDSCS_OK;
  });
}

fedscs_status fedscs_report_format(const fedscs_report* report, char* buf, size_t cap,
                                   size_t* len) {
  if (!report) return missing("report");
  return guard([&] { return copy_out(fedscs::eval::format_report(report->report), buf, cap, len); });
}

double fedscs_report_max_gap(const fedscs_report* report) {
  return report ? report->report.max_gap : std::numeric_limits<double>::quiet_NaN();
}

size_t fedscs_report_objective_count(const fedscs_report* report) {
  return report ? report->report.j_central.size() : 0;
}

fedscs_status fedscs_report_objective(const fedscs_report* report, const char* engine, size_t t,
                                      double* out) {
  if (!report) return missing("report");
  if (!engine || !out) return missing("engine/out");
  const auto& r = report->report;
  const std::vector<double>* list = nullptr;
  if (std::strcmp(engine, "central") == 0) list = &r.j_central;
  if (std::strcmp(engine, "fed") == 0) list = &r.j_fed;
  if (!list) return set_error(FEDSCS_ERR_INVALID_ARGUMENT, "engine must be central or fed");
  if (t >= list->size()) return set_error(FEDSCS_ERR_INVALID_ARGUMENT, "round out of range");
  *out = (*list)[t];
  return FEDSCS_OK;
}

fedscs_status fedscs_report_metric(const fedscs_report* report, const char* engine,
                                   const char* split, const char* client, double* accuracy,
                                   double* macro_f1) {
  if (!report) return missing("report");
  if (!engine || !split) return missing("engine/split");
  const auto* row = report->report.find(engine, split, client ? client : "");
  if (!row) return set_error(FEDSCS_ERR_INVALID_ARGUMENT, "no such metrics row");
  if (accuracy) *accuracy = row->accuracy;
  if (macro_f1) *macro_f1 = row->macro_f1;
  return FEDSCS_OK;
}

fedscs_status fedscs_report_tree_diff(const fedscs_report* report, char* buf, size_t cap,
                                      size_t* len) {
  if (!report) return missing("report");
  return guard([&] { return copy_out(report->report.tree_diff, buf, cap, len); });
}

// ---- sweeps

fedscs_status fedscs_sweep_run(const fedscs_config* config, const char* axis,
                               const char* const* values, size_t n_values, fedscs_sweep** out) {
  if (!config) return missing("config");
  if (!axis || !out) return missing("axis/out");
  if (n_values > 0 && !values) return missing("values");
  return guard([&] {
    fedscs::eval::SweepAxis a;
    if (std::strcmp(axis, "bins") == 0) {
      a = fedscs::eval::SweepAxis::kBins;
    } else if (std::strcmp(axis, "rho") == 0) {
      a = fedscs::eval::SweepAxis::kRho;
    } else {
      return set_error(FEDSCS_ERR_CONFIG, std::string("sweep axis must be bins or rho, got '") +
                                              axis + "'");
    }
    std::vector<std::string> v(values, values + n_values);
    *out = new fedscs_sweep{fedscs::eval::sweep(config->config, a, v)};
    return FEDSCS_OK;
  });
}

void fedscs_sweep_destroy(fedscs_sweep* sweep) { delete sweep; }

fedscs_status fedscs_sweep_write(const fedscs_sweep* sweep, const char* dir) {
  if (!sweep) return missing("sweep");
  if (!dir) return missing("dir");
  return guard([&] {
    fedscs::eval::write_sweep(sweep->sweep, dir);
    return FEDSCS_OK;
  });
}

fedscs_status fedscs_sweep_format(const fedscs_sweep* sweep, char* buf, size_t cap, size_t* len) {
  if (!sweep) return missing("sweep");
  return guard([&] { return copy_out(fedscs::eval::format_sweep(sweep->sweep), buf, cap, len); });
}

double fedscs_sweep_max_gap(const fedscs_sweep* sweep, size_t i) {
  if (!sweep || i >= sweep->sweep.reports.size()) return std::numeric_limits<double>::quiet_NaN();
  return sweep->sweep.reports[i].max_gap;
}

// ---- verification

fedscs_status fedscs_verify(const fedscs_config* config, fedscs_verify_result** out) {
  if (!config) return missing("config");
  if (!out) return missing("out");
  return guard([&] {
    *out = new fedscs_verify_result{fedscs::eval::verify(config->config)};
    return FEDSCS_OK;
  });
}

void fedscs_verify_destroy(fedscs_verify_result* result) { delete result; }

int fedscs_verify_passed(const fedscs_verify_result* result) {
  return result && result->report.passed() ? 1 : 0;
}

size_t fedscs_verify_count(const fedscs_verify_result* result) {
  return result ? result->report.checks.size() : 0;
}

fedscs_status fedscs_verify_item(const fedscs_verify_result* result, size_t i, int* passed,
                                 char* name, size_t cap, size_t* len) {
  if (!result) return missing("result");
  if (i >= result->report.checks.size()) {
    return set_error(FEDSCS_ERR_INVALID_ARGUMENT, "check index out of range");
  }
  const auto& c = result->report.checks[i];
  if (passed) *passed = c.passed ? 1 : 0;
  return guard([&] { return copy_out(c.name, name, cap, len); });
}

fedscs_status fedscs_verify_format(const fedscs_verify_result* result, char* buf, size_t cap,
                                   size_t* len) {
  if (!result) return missing("result");
  return guard([&] { return copy_out(fedscs::eval::format_verify(result->report), buf, cap, len); });
}

}  // extern "C"
