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

#include "binning/edges.hpp"

#include <algorithm>
#include <cmath>

namespace fedscs::binning {

uint32_t bin_index(std::span<const double> edges, double x) {
  require(!std::isnan(x), ErrorCode::kInvalidInput, "cannot bin NaN");
  auto it = std::upper_bound(edges.begin(), edges.end(), x);
  if (it == edges.begin()) return 0;
  return static_cast<uint32_t>(it - edges.begin() - 1);
}

std::size_t EdgeSet::max_bins() const {
  std::size_t m = 1;
  for (std::size_t f = 0; f < edges.size(); ++f) m = std::max(m, n_bins(f));
  return m;
}

void EdgeSet::validate() const {
  for (const auto& e : edges) {
    require(e.size() <= kMaxBinsPerFeature, ErrorCode::kInvalidInput, "too many edges");
    for (std::size_t i = 0; i < e.size(); ++i) {
      require(std::isfinite(e[i]), ErrorCode::kInvalidInput, "edge is not finite");
      require(i == 0 || e[i - 1] < e[i], ErrorCode::kInvalidInput,
              "edges must be strictly increasing");
    }
  }
}

std::vector<double> dedup_edges(std::span<const double> raw) {
  std::vector<double> out;
  out.reserve(raw.size());
  for (double v : raw) {
    if (out.empty() || out.back() < v) out.push_back(v);
  }
  return out;
}

}  // namespace fedscs::binning
