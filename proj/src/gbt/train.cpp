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

#include "gbt/train.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "binning/atoms.hpp"
#include "sketch/exact_quantiler.hpp"

namespace fedscs::gbt {

namespace {

struct PendingNode {
  std::vector<std::size_t> rows;
  int depth;
};

struct BestSplit {
  double gain = -std::numeric_limits<double>::infinity();
  int feature = -1;
  int bin = -1;
};

}  // namespace

TreeGroup grow_tree_group(const Matrix& features, const GradHess& gh,
                          const binning::EdgeSet& edges, const TrainConfig& config) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  const std::size_t k = static_cast<std::size_t>(gh.n_classes());
  require(gh.n_rows() == n, ErrorCode::kInvalidInput, "gradient rows do not match data");
  require(edges.n_features() == d, ErrorCode::kInvalidInput,
          "edge set feature count does not match data");

  std::vector<uint16_t> bins(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = features.row(i);
    for (std::size_t f = 0; f < d; ++f) bins[i * d + f] = static_cast<uint16_t>(edges.bin(f, x[f]));
  }

  TreeGroup group;
  group.n_classes = static_cast<int>(k);
  std::vector<PendingNode> pending;
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  pending.push_back({std::move(all), 0});
  group.nodes.emplace_back();

  std::vector<double> total_g(k), total_h(k), left_g(k), left_h(k);
  for (std::size_t id = 0; id < group.nodes.size(); ++id) {
    PendingNode node = std::move(pending[id]);
    std::fill(total_g.begin(), total_g.end(), 0.0);
    std::fill(total_h.begin(), total_h.end(), 0.0);
    for (std::size_t i : node.rows) {
      for (std::size_t c = 0; c < k; ++c) {
        total_g[c] += gh.g(i, c);
        total_h[c] += gh.h(i, c);
      }
    }
    double hess_sum = 0.0;
    for (double v : total_h) hess_sum += v;

    BestSplit best;
    if (node.depth < config.max_depth && hess_sum > 0.0) {
      binning::Histogram hist(edges, k);
      for (std::size_t i : node.rows) {
        for (std::size_t f = 0; f < d; ++f) hist.add(f, bins[i * d + f], 1, gh.g.row(i), gh.h.row(i));
      }
      for (std::size_t f = 0; f < d; ++f) {
        std::fill(left_g.begin(), left_g.end(), 0.0);
        std::fill(left_h.begin(), left_h.end(), 0.0);
        for (std::size_t q = 1; q < hist.n_bins(f); ++q) {
          auto bg = hist.grad(f, q - 1);
          auto bh = hist.hess(f, q - 1);
          double gain = 0.0;
          for (std::size_t c = 0; c < k; ++c) {
            left_g[c] += bg[c];
            left_h[c] += bh[c];
            gain += split_gain(left_g[c], left_h[c], total_g[c] - left_g[c],
                               total_h[c] - left_h[c], config.lambda, config.gamma);
          }
          if (gain > best.gain) best = {gain, static_cast<int>(f), static_cast<int>(q)};
        }
      }
    }

    if (best.feature < 0 || !(best.gain > 0.0)) {
      TreeNode& leaf = group.nodes[id];
      leaf.weights.resize(k);
      for (std::size_t c = 0; c < k; ++c) {
        leaf.weights[c] = leaf_weight(total_g[c], total_h[c], config.lambda);
      }
      continue;
    }

    PendingNode left{{}, node.depth + 1};
    PendingNode right{{}, node.depth + 1};
    const auto f = static_cast<std::size_t>(best.feature);
    for (std::size_t i : node.rows) {
      (bins[i * d + f] < static_cast<uint16_t>(best.bin) ? left : right).rows.push_back(i);
    }
    const auto left_id = static_cast<int32_t>(group.nodes.size());
    TreeNode& split = group.nodes[id];
    split.feature = best.feature;
    split.bin = best.bin;
    split.threshold = edges.threshold(f, static_cast<std::size_t>(best.bin));
    split.gain = best.gain;
    split.left = left_id;
    split.right = left_id + 1;
    group.nodes.emplace_back();
    group.nodes.emplace_back();
    pending.resize(group.nodes.size());
    pending[static_cast<std::size_t>(left_id)] = std::move(left);
    pending[static_cast<std::size_t>(left_id) + 1] = std::move(right);
  }
  return group;
}

TreeGroup grow_round_central(const Dataset& data, const Matrix& margins,
                             const binning::EdgeSet& edges, const TrainConfig& config) {
  GradHess gh = softmax_grad_hess(margins, data.labels);
  quantize(gh);
  return grow_tree_group(data.features, gh, edges, config);
}

binning::EdgeSet exact_edges(const Matrix& features, std::span<const double> weights, int bins,
                             uint32_t round) {
  const std::size_t n = features.rows();
  require(weights.size() == n, ErrorCode::kInvalidInput, "weight count does not match rows");
  std::vector<sketch::ExactWeightedQuantiler> per_feature;
  per_feature.reserve(features.cols());
  std::vector<double> column(n);
  for (std::size_t f = 0; f < features.cols(); ++f) {
    for (std::size_t i = 0; i < n; ++i) column[i] = features(i, f);
    per_feature.emplace_back(column, weights);
  }
  return binning::build_edges<sketch::ExactWeightedQuantiler>(per_feature, bins, round);
}

CentralRun train_central(const Dataset& data, const TrainConfig& config) {
  config.validate();
  data.validate();
  require(data.n_rows() >= 1, ErrorCode::kInvalidInput, "dataset is empty");
  require(data.n_rows() <= kMaxExactRows, ErrorCode::kInvalidInput,
          "too many rows for exact statistic sums");

  CentralRun run;
  run.ensemble.n_classes = data.n_classes;
  run.ensemble.eta = config.eta;
  run.margins = Matrix(data.n_rows(), static_cast<std::size_t>(data.n_classes),
                       run.ensemble.base_margin);
  run.objective.push_back(mean_log_loss(run.margins, data.labels));
  for (int t = 1; t <= config.rounds; ++t) {
    GradHess gh = softmax_grad_hess(run.margins, data.labels);
    quantize(gh);
    const auto weights = hessian_weights(gh);
    binning::EdgeSet edges =
        exact_edges(data.features, weights, config.bins, static_cast<uint32_t>(t));
    TreeGroup group = grow_tree_group(data.features, gh, edges, config);
    accumulate_round(group, config.eta, data.features, run.margins);
    run.ensemble.rounds.push_back(std::move(group));
    run.edges.push_back(std::move(edges));
    run.objective.push_back(mean_log_loss(run.margins, data.labels));
  }
  return run;
}

}  // namespace fedscs::gbt
