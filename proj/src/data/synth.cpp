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

#include "data/synth.hpp"

#include <cmath>
#include <random>

namespace fedscs::data {

Table make_blobs(const BlobSpec& spec) {
  require(spec.rows >= 1, ErrorCode::kConfig, "blob rows must be >= 1");
  require(spec.features >= 1, ErrorCode::kConfig, "blob features must be >= 1");
  require(spec.classes >= 1, ErrorCode::kConfig, "blob classes must be >= 1");
  require(spec.ids >= 1, ErrorCode::kConfig, "blob ids must be >= 1");
  require(spec.spread > 0.0 && spec.center_box >= 0.0, ErrorCode::kConfig,
          "blob spread must be positive");
  const auto d = static_cast<std::size_t>(spec.features);
  const auto k = static_cast<std::size_t>(spec.classes);

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> box(-spec.center_box, spec.center_box);
  std::normal_distribution<double> noise(0.0, spec.spread);
  std::uniform_int_distribution<int> pick_class(0, spec.classes - 1);
  std::uniform_int_distribution<int> pick_id(0, spec.ids - 1);

  Matrix centers(k, d);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t f = 0; f < d; ++f) centers(c, f) = box(rng);
  }

  Table table;
  table.data.n_classes = spec.classes;
  table.data.features = Matrix(spec.rows, d);
  table.data.labels.resize(spec.rows);
  table.ids.resize(spec.rows);
  for (std::size_t i = 0; i < spec.rows; ++i) {
    const int label = pick_class(rng);
    table.data.labels[i] = label;
    for (std::size_t f = 0; f < d; ++f) {
      double v = centers(static_cast<std::size_t>(label), f) + noise(rng);
      if (f < static_cast<std::size_t>(spec.discrete)) v = std::round(v);
      table.data.features(i, f) = v;
    }
    table.ids[i] = "s" + std::to_string(pick_id(rng));
  }
  for (std::size_t f = 0; f < d; ++f) table.feature_names.push_back("f" + std::to_string(f));
  for (std::size_t c = 0; c < k; ++c) table.class_names.push_back(std::to_string(c));
  return table;
}

}  // namespace fedscs::data
