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

#include "data/split.hpp"

#include <cmath>

namespace fedscs::data {

namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

uint64_t fnv(uint64_t h, uint8_t byte) { return (h ^ byte) * kFnvPrime; }

uint64_t splitmix_finalize(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t finish(uint64_t h, uint64_t seed) {
  for (int i = 0; i < 8; ++i) h = fnv(h, static_cast<uint8_t>(seed >> (8 * i)));
  return splitmix_finalize(h);
}

}  // namespace

uint64_t stable_hash(std::span<const uint8_t> key, uint64_t seed) {
  uint64_t h = kFnvOffset;
  for (uint8_t b : key) h = fnv(h, b);
  return finish(h, seed);
}

uint64_t stable_hash(std::string_view key, uint64_t seed) {
  uint64_t h = kFnvOffset;
  for (char c : key) h = fnv(h, static_cast<uint8_t>(c));
  return finish(h, seed);
}

uint64_t stable_hash(uint64_t key, uint64_t seed) {
  uint64_t h = kFnvOffset;
  for (int i = 0; i < 8; ++i) h = fnv(h, static_cast<uint8_t>(key >> (8 * i)));
  return finish(h, seed);
}

Split hash_split(const Table& table, const SplitSpec& spec) {
  require(std::isfinite(spec.train_fraction) && spec.train_fraction >= 0.0, ErrorCode::kConfig,
          "train fraction must be finite and non-negative");
  require(!spec.key_by_id || table.has_ids(), ErrorCode::kConfig,
          "split keyed by id needs an id column");
  const std::size_t n = table.data.n_rows();
  Split out;
  for (std::size_t i = 0; i < n; ++i) {
    bool train;
    if (spec.train_fraction >= 1.0) {
      train = true;
    } else {
      // fraction < 1, so the threshold is below 2^64 and converts exactly.
      const auto threshold = static_cast<uint64_t>(std::ldexp(spec.train_fraction, 64));
      const uint64_t h = spec.key_by_id ? stable_hash(std::string_view(table.ids[i]), spec.seed)
                                        : stable_hash(static_cast<uint64_t>(i), spec.seed);
      train = h < threshold;
    }
    (train ? out.train : out.valid).push_back(i);
  }
  return out;
}

}  // namespace fedscs::data
