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

#include <cstdint>
#include <string>
#include <vector>

#include "data/csv.hpp"

namespace fedscs::data {

enum class PartitionMode : uint8_t { kById, kIid, kLabelSkew };

struct PartitionSpec {
  PartitionMode mode = PartitionMode::kIid;
  int clients = 1;     // iid / label-skew
  double alpha = 0.5;  // Dirichlet concentration for label-skew
  uint64_t seed = 0;
};

/// Parses "id", "iid:K" and "skew:K[:ALPHA]". Throws kConfig.
PartitionSpec parse_partition(const std::string& text, uint64_t seed);
std::string format_partition(const PartitionSpec& spec);

struct Partition {
  std::vector<std::vector<std::size_t>> rows;  // per client, ascending
  std::vector<std::string> names;              // id value, or "client-<i>"
};

/// Disjoint, exhaustive assignment of rows to clients. Row order inside a
/// client follows the input. Throws kPartition when the mode cannot be
/// satisfied (k < 1, k > N, missing id column).
Partition partition_clients(const Table& table, const PartitionSpec& spec);

}  // namespace fedscs::data
