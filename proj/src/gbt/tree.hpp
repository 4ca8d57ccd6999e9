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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"
#include "gbt/dataset.hpp"

namespace fedscs::gbt {

/// A node of a tree group. Split nodes route x[feature] < threshold to `left`;
/// `bin` is the edge index q with threshold == edges[feature][q]. Leaves carry
/// one raw (unshrunk) weight per class.
struct TreeNode {
  int32_t feature = -1;
  int32_t bin = -1;
  double threshold = 0.0;
  double gain = 0.0;
  int32_t left = -1;
  int32_t right = -1;
  std::vector<double> weights;

  bool is_leaf() const { return left < 0; }
  bool operator==(const TreeNode&) const = default;
};

/// The K class-wise trees of one boosting round. They share a single structure
/// (splits are chosen on the class-summed gain), so they are stored once with
/// K weights per leaf. Nodes are stored breadth-first; children always have a
/// larger index than their parent.
struct TreeGroup {
  int n_classes = 0;
  std::vector<TreeNode> nodes;

  const TreeNode& leaf_for(std::span<const double> x) const;
  /// Number of distinct trees this group stands for (one per class).
  int num_trees() const { return n_classes; }
  std::size_t num_leaves() const;
  bool operator==(const TreeGroup&) const = default;
};

/// Additive model: margin_k(x) = base_margin + sum_t eta * tree_{t,k}(x).
struct Ensemble {
  int n_classes = 0;
  double eta = 0.3;
  double base_margin = 0.0;
  std::vector<TreeGroup> rounds;

  bool operator==(const Ensemble&) const = default;
};

/// margins += eta * group(x) for every row. This is the only place shrinkage
/// is applied, both at train time and at prediction time.
void accumulate_round(const TreeGroup& group, double eta, const Matrix& features,
                      Matrix& margins);

Matrix predict_margins(const Ensemble& ensemble, const Dataset& data);

std::vector<int32_t> predict_labels(const Matrix& margins);

/// Structural comparison of two ensembles. Returns nullopt when both have the
/// same splits everywhere and leaf weights agree within `rel_tol`; otherwise a
/// description of the first divergent node.
std::optional<std::string> first_divergence(const Ensemble& a, const Ensemble& b,
                                            double rel_tol);

}  // namespace fedscs::gbt
