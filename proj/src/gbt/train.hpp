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

#include <span>
#include <vector>

#include "binning/edges.hpp"
#include "gbt/dataset.hpp"
#include "gbt/objective.hpp"
#include "gbt/tree.hpp"

namespace fedscs::gbt {

/// Centralized histogram split search over raw rows.
///
/// Grows one shared structure depth-wise: at each node every candidate
/// (f, q), q = 1..n_bins(f)-1, is scored by the class-summed gain; the best one
/// wins with ties going to the smallest feature and then the smallest q.
/// A node becomes a leaf at depth == max_depth, when its class-summed Hessian is
/// zero, or when the best gain is <= 0. `gh` is used as given; callers that
/// need partition-independent sums quantize it first.
TreeGroup grow_tree_group(const Matrix& features, const GradHess& gh,
                          const binning::EdgeSet& edges, const TrainConfig& config);

/// One round: derivatives at `margins`, quantized, then grow_tree_group.
TreeGroup grow_round_central(const Dataset& data, const Matrix& margins,
                             const binning::EdgeSet& edges, const TrainConfig& config);

/// Edges from the exact Hessian-weighted quantiles of every feature column.
binning::EdgeSet exact_edges(const Matrix& features, std::span<const double> weights, int bins,
                             uint32_t round);

struct CentralRun {
  Ensemble ensemble;
  /// objective[t] is the mean training log-loss after t rounds; objective[0] = log K.
  std::vector<double> objective;
  Matrix margins;
  std::vector<binning::EdgeSet> edges;
};

CentralRun train_central(const Dataset& data, const TrainConfig& config);

}  // namespace fedscs::gbt
