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
#include <vector>

namespace fedscs::eval {

/// counts[t * K + p]: rows with true class t predicted as p.
struct Confusion {
  int n_classes = 0;
  std::vector<uint64_t> counts;

  Confusion() = default;
  explicit Confusion(int k) : n_classes(k), counts(static_cast<std::size_t>(k) * k, 0) {}

  uint64_t at(int truth, int pred) const {
    return counts[static_cast<std::size_t>(truth) * n_classes + pred];
  }
  uint64_t total() const;
  bool operator==(const Confusion&) const = default;
};

Confusion confusion(std::span<const int32_t> truth, std::span<const int32_t> pred, int n_classes);

/// NaN on an empty matrix.
double accuracy(const Confusion& c);
/// Unweighted mean of per-class F1 over classes that occur as a true or a
/// predicted label. NaN on an empty matrix.
double macro_f1(const Confusion& c);

}  // namespace fedscs::eval
