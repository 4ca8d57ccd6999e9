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

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"

namespace fedscs::gbt {

/// Dense feature matrix plus integer class labels in [0, n_classes).
struct Dataset {
  Matrix features;
  std::vector<int32_t> labels;
  int n_classes = 0;

  std::size_t n_rows() const { return features.rows(); }
  std::size_t n_features() const { return features.cols(); }
  std::span<const double> row(std::size_t i) const { return features.row(i); }

  /// Rows `idx` (in the given order) as a new dataset with the same class count.
  Dataset subset(std::span<const std::size_t> idx) const;

  /// Throws kInvalidInput unless labels are in range and every value is finite.
  /// Empty datasets are allowed here; trainers check for n_rows() >= 1.
  void validate() const;
};

struct TrainConfig {
  int rounds = 10;
  int max_depth = 4;
  int bins = 64;
  double lambda = 1.0;
  double gamma = 0.1;
  double eta = 0.2;
  uint64_t seed = 0;

  void validate() const;
};

inline Dataset Dataset::subset(std::span<const std::size_t> idx) const {
  Dataset out;
  out.n_classes = n_classes;
  out.features = Matrix(idx.size(), n_features());
  out.labels.reserve(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    auto src = row(idx[r]);
    std::copy(src.begin(), src.end(), out.features.row(r).begin());
    out.labels.push_back(labels[idx[r]]);
  }
  return out;
}

inline void Dataset::validate() const {
  require(n_classes >= 1, ErrorCode::kInvalidInput, "dataset needs at least one class");
  require(labels.size() == n_rows(), ErrorCode::kInvalidInput,
          "label count does not match row count");
  for (int32_t y : labels) {
    require(y >= 0 && y < n_classes, ErrorCode::kInvalidInput, "label out of range");
  }
  for (double v : features.data()) {
    require(std::isfinite(v), ErrorCode::kInvalidInput, "non-finite feature value");
  }
}

inline void TrainConfig::validate() const {
  require(rounds >= 0, ErrorCode::kConfig, "rounds must be >= 0");
  require(max_depth >= 1, ErrorCode::kConfig, "max_depth must be >= 1");
  require(bins >= 2, ErrorCode::kConfig, "bins must be >= 2");
  require(bins <= 65534, ErrorCode::kConfig, "bins must be <= 65534");
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::kConfig, "lambda must be > 0");
  require(gamma >= 0.0 && std::isfinite(gamma), ErrorCode::kConfig, "gamma must be >= 0");
  require(eta > 0.0 && eta <= 1.0, ErrorCode::kConfig, "eta must lie in (0, 1]");
}

}  // namespace fedscs::gbt
