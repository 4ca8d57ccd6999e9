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

#include "common.hpp"
#include "sketch/calibration.hpp"

namespace fedscs::binning {

inline constexpr std::size_t kMaxBinsPerFeature = 65535;

/// Bin index of x against strictly increasing edges: the largest b with
/// edges[b] <= x, clamped to 0 below the first edge. An empty edge list is a
/// single degenerate bin. Throws kInvalidInput on NaN.
uint32_t bin_index(std::span<const double> edges, double x);

/// Per-feature bin edges of one boosting round.
///
/// Feature f has max(1, edges[f].size()) bins; bin b covers
/// [edges[b], edges[b+1]) and the last bin is open above. Split candidates are
/// q = 1..n_bins-1 with rule "left iff bin < q iff x < edges[q]".
struct EdgeSet {
  uint32_t round = 0;
  std::vector<std::vector<double>> edges;

  std::size_t n_features() const { return edges.size(); }
  std::size_t n_bins(std::size_t f) const {
    return edges[f].empty() ? 1 : edges[f].size();
  }
  std::size_t max_bins() const;
  uint32_t bin(std::size_t f, double x) const { return bin_index(edges[f], x); }
  double threshold(std::size_t f, std::size_t q) const { return edges[f][q]; }

  /// Throws kInvalidInput unless every edge list is finite and strictly increasing.
  void validate() const;

  bool operator==(const EdgeSet&) const = default;
};

/// Drops consecutive duplicates of a non-decreasing quantile vector.
std::vector<double> dedup_edges(std::span<const double> raw);

/// Split points at levels b/B, b = 0..B, before dedup. Works with any
/// summary exposing split_points(levels) and empty(). Empty summaries yield an
/// empty vector.
template <typename Summary>
std::vector<double> raw_edges(const Summary& summary, int bins) {
  if (summary.empty()) return {};
  const auto levels = sketch::edge_levels(bins);
  return summary.split_points(levels);
}

/// Edge set from one merged summary per feature.
template <typename Summary>
EdgeSet build_edges(std::span<const Summary> per_feature, int bins, uint32_t round) {
  require(bins >= 2 && static_cast<std::size_t>(bins) < kMaxBinsPerFeature,
          ErrorCode::kInvalidInput, "bins out of range");
  EdgeSet out;
  out.round = round;
  out.edges.reserve(per_feature.size());
  for (const Summary& s : per_feature) out.edges.push_back(dedup_edges(raw_edges(s, bins)));
  return out;
}

}  // namespace fedscs::binning
