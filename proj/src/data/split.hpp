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
#include <span>
#include <string_view>
#include <vector>

#include "data/csv.hpp"

namespace fedscs::data {

/// FNV-1a (64-bit) over `key` followed by the 8 little-endian bytes of
/// `seed`, then the SplitMix64 finalizer. Byte-oriented, so the result does
/// not depend on platform or endianness.
uint64_t stable_hash(std::span<const uint8_t> key, uint64_t seed);
uint64_t stable_hash(std::string_view key, uint64_t seed);
/// Row-index key: the index as 8 little-endian bytes.
uint64_t stable_hash(uint64_t key, uint64_t seed);

struct SplitSpec {
  double train_fraction = 0.8;
  uint64_t seed = 0;
  bool key_by_id = false;  // hash the id column instead of the row index
};

struct Split {
  std::vector<std::size_t> train;  // ascending row indices
  std::vector<std::size_t> valid;
};

/// Row goes to train iff hash(key, seed) < train_fraction * 2^64.
Split hash_split(const Table& table, const SplitSpec& spec);

}  // namespace fedscs::data
