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

#include "eval/metrics.hpp"

#include <limits>
#include <numeric>

#include "common.hpp"

namespace fedscs::eval {

uint64_t Confusion::total() const {
  return std::accumulate(counts.begin(), counts.end(), uint64_t{0});
}

Confusion confusion(std::span<const int32_t> truth, std::span<const int32_t> pred, int n_classes) {
  require(truth.size() == pred.size(), ErrorCode::kInvalidInput,
          "truth and prediction lengths differ");
  require(n_classes >= 1, ErrorCode::kInvalidInput, "need at least one class");
  Confusion c(n_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    require(truth[i] >= 0 && truth[i] < n_classes && pred[i] >= 0 && pred[i] < n_classes,
            ErrorCode::kInvalidInput, "label out of range");
    ++c.counts[static_cast<std::size_t>(truth[i]) * n_classes + pred[i]];
  }
  return c;
}

double accuracy(const Confusion& c) {
  const uint64_t n = c.total();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  uint64_t hit = 0;
  for (int k = 0; k < c.n_classes; ++k) hit += c.at(k, k);
  return static_cast<double>(hit) / static_cast<double>(n);
}

double macro_f1(const Confusion& c) {
  if (c.total() == 0) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  int present = 0;
  for (int k = 0; k < c.n_classes; ++k) {
    uint64_t actual = 0;
    uint64_t predicted = 0;
    for (int j = 0; j < c.n_classes; ++j) {
      actual += c.at(k, j);
      predicted += c.at(j, k);
    }
    if (actual == 0 && predicted == 0) continue;
    ++present;
    // F1 = 2TP / (2TP + FP + FN) = 2TP / (actual + predicted)
    sum += 2.0 * static_cast<double>(c.at(k, k)) / static_cast<double>(actual + predicted);
  }
  return sum / present;
}

}  // namespace fedscs::eval
