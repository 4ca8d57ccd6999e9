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

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eval/metrics.hpp"

namespace fedscs::eval {

/// Metrics of one model on one slice of rows.
struct MetricsRow {
  std::string engine;  // "central" or "fed"
  std::string split;   // "train" or "valid"
  std::string client;  // empty for the pooled slice
  Confusion confusion;
  double accuracy = 0.0;  // stored aggregate, recomputed by validate()
  double macro_f1 = 0.0;

  static MetricsRow make(std::string engine, std::string split, std::string client,
                         Confusion c);
};

struct RunReport {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<double> j_central;  // J_0..J_T
  std::vector<double> j_fed;      // empty for a central-only run
  std::vector<MetricsRow> metrics;
  double max_gap = 0.0;     // max_t |j_fed[t] - j_central[t]| over rounds both report
  std::string tree_diff;    // "identical", the first divergence, or "n/a"
  std::string eval_note;    // how per-client rows were produced

  /// Recomputes max_gap and the per-row metrics from the raw lists.
  void finalize();
  /// Throws kInvalidInput if any stored aggregate disagrees with its raw data.
  void validate() const;
  const MetricsRow* find(const std::string& engine, const std::string& split,
                         const std::string& client = "") const;
};

double objective_gap(const std::vector<double>& a, const std::vector<double>& b);

/// objective.csv, metrics.csv and summary.csv inside `dir` (created if
/// missing). Validates first.
void write_report(const RunReport& report, const std::string& dir);

/// Console table.
std::string format_report(const RunReport& report);

}  // namespace fedscs::eval
