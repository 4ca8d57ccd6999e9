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

#include <optional>
#include <string>
#include <vector>

#include "data/csv.hpp"
#include "data/partition.hpp"
#include "data/split.hpp"
#include "eval/report.hpp"
#include "eval/run_config.hpp"
#include "gbt/train.hpp"
#include "protocol/training.hpp"

namespace fedscs::eval {

struct PreparedData {
  data::Table table;
  data::Split split;
  data::Table train;
  data::Table valid;
};

/// Loads the CSV (or generates blobs) and applies the hash split.
PreparedData prepare_data(const RunConfig& config);

struct ClientSlices {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> train;  // rows of the full table
  std::vector<std::vector<std::size_t>> valid;
};

/// Partitions the full table, then intersects each client with the split so
/// every client keeps its own train and validation slice.
ClientSlices client_slices(const PreparedData& prepared, const RunConfig& config);

protocol::ServerConfig server_config(const RunConfig& config, int n_classes);

/// Federated training of the given slices over an in-process network that
/// round-trips every message through the wire codec.
protocol::FedRun train_federated(const data::Table& table, const ClientSlices& slices,
                                 const RunConfig& config);

struct RunOutcome {
  RunReport report;
  gbt::CentralRun central;
  std::optional<protocol::FedRun> fed;
};

/// Central mode trains the reference engine only. Fed mode also trains it on
/// the pooled training rows, so the report can show the objective gap and
/// tree diff. Throws on any error, including an aborted federated run.
RunOutcome run(const RunConfig& config);

enum class SweepAxis : uint8_t { kBins, kRho };

struct SweepOutcome {
  SweepAxis axis = SweepAxis::kBins;
  std::vector<std::string> values;
  std::vector<RunReport> reports;
};

/// One federated run per value. Requires at least two values.
SweepOutcome sweep(const RunConfig& config, SweepAxis axis, const std::vector<std::string>& values);

/// Per-run report directories plus sweep.csv (gap and accuracy per value).
void write_sweep(const SweepOutcome& sweep, const std::string& dir);
std::string format_sweep(const SweepOutcome& sweep);

}  // namespace fedscs::eval
