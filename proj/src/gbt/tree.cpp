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

#include "gbt/tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fedscs::gbt {

const TreeNode& TreeGroup::leaf_for(std::span<const double> x) const {
  std::size_t id = 0;
  while (!nodes[id].is_leaf()) {
    const TreeNode& n = nodes[id];
    id = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                                                      : n.right);
  }
  return nodes[id];
}

std::size_t TreeGroup::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

void accumulate_round(const TreeGroup& group, double eta, const Matrix& features,
                      Matrix& margins) {
  require(margins.rows() == features.rows(), ErrorCode::kInvalidInput,
          "margin rows do not match feature rows");
  require(static_cast<int>(margins.cols()) == group.n_classes, ErrorCode::kInvalidInput,
          "margin columns do not match class count");
  if (group.nodes.empty()) return;
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const TreeNode& leaf = group.leaf_for(features.row(i));
    auto m = margins.row(i);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = m[k] + eta * leaf.weights[k];
  }
}

Matrix predict_margins(const Ensemble& ensemble, const Dataset& data) {
  for (const TreeGroup& g : ensemble.rounds) {
    for (const TreeNode& n : g.nodes) {
      if (!n.is_leaf()) {
        require(n.feature >= 0 && static_cast<std::size_t>(n.feature) < data.n_features(),
                ErrorCode::kInvalidInput, "ensemble references a feature the data lacks");
      }
    }
  }
  Matrix margins(data.n_rows(), static_cast<std::size_t>(ensemble.n_classes),
                 ensemble.base_margin);
  for (const TreeGroup& g : ensemble.rounds) {
    accumulate_round(g, ensemble.eta, data.features, margins);
  }
  return margins;
}

std::vector<int32_t> predict_labels(const Matrix& margins) {
  std::vector<int32_t> out(margins.rows());
  for (std::size_t i = 0; i < margins.rows(); ++i) {
    auto m = margins.row(i);
    out[i] = static_cast<int32_t>(std::max_element(m.begin(), m.end()) - m.begin());
  }
  return out;
}

namespace {

bool close_rel(double a, double b, double rel_tol) {
  if (a == b) return true;
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::optional<std::string> first_divergence(const Ensemble& a, const Ensemble& b,
                                            double rel_tol) {
  std::ostringstream os;
  if (a.n_classes != b.n_classes) {
    os << "class count differs (" << a.n_classes << " vs " << b.n_classes << ")";
    return os.str();
  }
  if (a.rounds.size() != b.rounds.size()) {
    os << "round count differs (" << a.rounds.size() << " vs " << b.rounds.size() << ")";
    return os.str();
  }
  for (std::size_t t = 0; t < a.rounds.size(); ++t) {
    const auto& na = a.rounds[t].nodes;
    const auto& nb = b.rounds[t].nodes;
    const std::size_t common = std::min(na.size(), nb.size());
    for (std::size_t i = 0; i < common; ++i) {
      const TreeNode& x = na[i];
      const TreeNode& y = nb[i];
      if (x.is_leaf() != y.is_leaf() || x.feature != y.feature || x.bin != y.bin ||
          x.threshold != y.threshold || x.left != y.left || x.right != y.right) {
        os << "round " << t + 1 << " node " << i << ": split differs";
        return os.str();
      }
      if (x.weights.size() != y.weights.size()) {
        os << "round " << t + 1 << " node " << i << ": leaf arity differs";
        return os.str();
      }
      for (std::size_t k = 0; k < x.weights.size(); ++k) {
        if (!close_rel(x.weights[k], y.weights[k], rel_tol)) {
          os << "round " << t + 1 << " node " << i << " class " << k << ": leaf weight "
             << x.weights[k] << " vs " << y.weights[k];
          return os.str();
        }
      }
    }
    if (na.size() != nb.size()) {
      os << "round " << t + 1 << ": node count differs (" << na.size() << " vs " << nb.size()
         << ")";
      return os.str();
    }
  }
  return std::nullopt;
}

}  // namespace fedscs::gbt
