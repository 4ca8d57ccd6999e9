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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "data/synth.hpp"
#include "eval/metrics.hpp"
#include "gbt/train.hpp"

namespace fedscs::gbt {
namespace {

Dataset make_dataset(std::vector<std::vector<double>> rows, std::vector<int32_t> labels, int k) {
  Dataset d;
  d.n_classes = k;
  d.features = Matrix(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t f = 0; f < rows[i].size(); ++f) d.features(i, f) = rows[i][f];
  }
  d.labels = std::move(labels);
  return d;
}

GradHess quantized_at_zero(const Dataset& d) {
  GradHess gh = softmax_grad_hess(Matrix(d.n_rows(), static_cast<std::size_t>(d.n_classes)),
                                  d.labels);
  quantize(gh);
  return gh;
}

binning::EdgeSet edges_for(const Dataset& d, const GradHess& gh, int bins) {
  return exact_edges(d.features, hessian_weights(gh), bins, 1);
}

TEST(GrowTree, FourPointSingleSplit) {
  const auto d = make_dataset({{0}, {1}, {2}, {3}}, {0, 0, 1, 1}, 2);
  const auto gh = quantized_at_zero(d);
  const auto edges = edges_for(d, gh, 4);
  TrainConfig cfg;
  cfg.max_depth = 1;
  cfg.gamma = 0.0;
  const auto g = grow_tree_group(d.features, gh, edges, cfg);
  ASSERT_EQ(g.nodes.size(), 3u);
  EXPECT_EQ(g.nodes[0].feature, 0);
  EXPECT_EQ(g.nodes[0].threshold, 2.0);
  // Left leaf holds class 0: g = (-0.5, 0.5) per row, h = 0.25.
  EXPECT_DOUBLE_EQ(g.nodes[1].weights[0], 1.0 / 1.5);
  EXPECT_DOUBLE_EQ(g.nodes[1].weights[1], -1.0 / 1.5);
}

TEST(GrowTree, PureNodeIsOneLeaf) {
  const auto d = make_dataset({{0}, {1}, {2}, {3}}, {1, 1, 1, 1}, 2);
  TrainConfig cfg;
  auto run = train_central(d, cfg);
  for (const auto& g : run.ensemble.rounds) EXPECT_EQ(g.nodes.size(), 1u);
}

TEST(GrowTree, XorNeedsDepthTwo) {
  const auto d = make_dataset({{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}},
                              {0, 1, 1, 0, 0, 1, 1, 0}, 2);
  const auto gh = quantized_at_zero(d);
  TrainConfig cfg;
  cfg.max_depth = 2;
  cfg.gamma = 0.0;
  // At the root every split has zero gain; force a depth-2 tree by growing
  // one level at a time from the first-feature split.
  auto edges = edges_for(d, gh, 4);
  auto root = grow_tree_group(d.features, gh, edges, cfg);
  EXPECT_EQ(root.nodes.size(), 1u) << "XOR root has no positive-gain split";
  for (int side = 0; side < 2; ++side) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
      if ((d.features(i, 0) < 1.0) == (side == 0)) rows.push_back(i);
    }
    const Dataset half = d.subset(rows);
    GradHess hgh{Matrix(rows.size(), 2), Matrix(rows.size(), 2)};
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (int c = 0; c < 2; ++c) {
        hgh.g(r, c) = gh.g(rows[r], c);
        hgh.h(r, c) = gh.h(rows[r], c);
      }
    }
    const auto sub = grow_tree_group(half.features, hgh, edges, cfg);
    ASSERT_EQ(sub.nodes.size(), 3u);
    EXPECT_EQ(sub.nodes[0].feature, 1);
    const double sign = side == 0 ? 1.0 : -1.0;
    EXPECT_GT(sign * sub.nodes[1].weights[0], 0.0);
    EXPECT_LT(sign * sub.nodes[2].weights[0], 0.0);
  }
}

// Exhaustive split search over raw rows: for every node the chosen split must
// be the first (feature, q) in scan order reaching the best class-summed gain,
// and leaf weights must be -G/(H+lambda) of the rows reaching the leaf.
struct Oracle {
  const Dataset& d;
  const GradHess& gh;
  const binning::EdgeSet& edges;
  const TrainConfig& cfg;

  struct Best {
    double gain = -std::numeric_limits<double>::infinity();
    int feature = -1;
    int bin = -1;
  };

  Best best_split(const std::vector<std::size_t>& rows) const {
    const std::size_t k = static_cast<std::size_t>(gh.n_classes());
    Best best;
    for (std::size_t f = 0; f < d.n_features(); ++f) {
      for (std::size_t q = 1; q < edges.n_bins(f); ++q) {
        std::vector<double> gl(k, 0.0), hl(k, 0.0), gr(k, 0.0), hr(k, 0.0);
        for (std::size_t i : rows) {
          const bool left = d.features(i, f) < edges.edges[f][q];
          for (std::size_t c = 0; c < k; ++c) {
            (left ? gl : gr)[c] += gh.g(i, c);
            (left ? hl : hr)[c] += gh.h(i, c);
          }
        }
        double gain = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          gain += split_gain(gl[c], hl[c], gr[c], hr[c], cfg.lambda, cfg.gamma);
        }
        if (gain > best.gain) best = {gain, static_cast<int>(f), static_cast<int>(q)};
      }
    }
    return best;
  }

  void check(const TreeGroup& g, std::size_t id, const std::vector<std::size_t>& rows,
             int depth) const {
    const std::size_t k = static_cast<std::size_t>(gh.n_classes());
    const TreeNode& node = g.nodes[id];
    double hess = 0.0;
    for (std::size_t i : rows) {
      for (std::size_t c = 0; c < k; ++c) hess += gh.h(i, c);
    }
    const Best best = depth < cfg.max_depth && hess > 0.0 ? best_split(rows) : Best{};
    if (best.feature < 0 || !(best.gain > 0.0)) {
      ASSERT_TRUE(node.is_leaf()) << "node " << id;
      for (std::size_t c = 0; c < k; ++c) {
        double gs = 0.0, hs = 0.0;
        for (std::size_t i : rows) {
          gs += gh.g(i, c);
          hs += gh.h(i, c);
        }
        EXPECT_DOUBLE_EQ(node.weights[c], -gs / (hs + cfg.lambda)) << "node " << id;
      }
      return;
    }
    ASSERT_FALSE(node.is_leaf()) << "node " << id;
    EXPECT_EQ(node.feature, best.feature) << "node " << id;
    EXPECT_EQ(node.bin, best.bin) << "node " << id;
    EXPECT_EQ(node.gain, best.gain) << "node " << id;
    std::vector<std::size_t> left, right;
    for (std::size_t i : rows) {
      (d.features(i, static_cast<std::size_t>(node.feature)) < node.threshold ? left : right)
          .push_back(i);
    }
    check(g, static_cast<std::size_t>(node.left), left, depth + 1);
    check(g, static_cast<std::size_t>(node.right), right, depth + 1);
  }
};

TEST(GrowTree, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    data::BlobSpec spec;
    spec.rows = 150 + rng() % 200;
    spec.features = 2 + static_cast<int>(rng() % 4);
    spec.classes = 2 + static_cast<int>(rng() % 5);
    spec.discrete = static_cast<int>(rng() % 2);
    spec.spread = 3.0;
    spec.seed = rng();
    const Dataset d = data::make_blobs(spec).data;
    Matrix margins(d.n_rows(), static_cast<std::size_t>(d.n_classes));
    std::normal_distribution<double> noise(0.0, 0.5);
    for (double& v : margins.data()) v = noise(rng);
    GradHess gh = softmax_grad_hess(margins, d.labels);
    quantize(gh);
    const auto edges = edges_for(d, gh, 8 + static_cast<int>(rng() % 24));
    TrainConfig cfg;
    cfg.max_depth = 3;
    const auto g = grow_tree_group(d.features, gh, edges, cfg);
    std::vector<std::size_t> all(d.n_rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    Oracle{d, gh, edges, cfg}.check(g, 0, all, 0);
  }
}

TEST(GrowTree, TiesGoToSmallestFeature) {
  // Two identical columns: every candidate on feature 1 ties with feature 0.
  const auto d = make_dataset({{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {0, 0, 1, 1}, 2);
  const auto gh = quantized_at_zero(d);
  TrainConfig cfg;
  cfg.max_depth = 1;
  const auto g = grow_tree_group(d.features, gh, edges_for(d, gh, 4), cfg);
  EXPECT_EQ(g.nodes[0].feature, 0);
}

TEST(GrowTree, ConstantFeatureHasNoCandidates) {
  const auto d = make_dataset({{5, 0}, {5, 1}, {5, 2}, {5, 3}}, {0, 0, 1, 1}, 2);
  const auto gh = quantized_at_zero(d);
  const auto edges = edges_for(d, gh, 4);
  EXPECT_EQ(edges.n_bins(0), 1u);
  TrainConfig cfg;
  cfg.max_depth = 1;
  EXPECT_EQ(grow_tree_group(d.features, gh, edges, cfg).nodes[0].feature, 1);
}

TEST(Ensemble, EmptyPredictsZeroMargins) {
  const auto d = make_dataset({{0}, {1}}, {0, 1}, 3);
  Ensemble e;
  e.n_classes = 3;
  const Matrix m = predict_margins(e, d);
  for (double v : m.data()) EXPECT_EQ(v, 0.0);
}

TEST(Ensemble, ConstantTreeAddsEtaTimesWeight) {
  const auto d = make_dataset({{0}, {1}}, {0, 1}, 2);
  Ensemble e;
  e.n_classes = 2;
  e.eta = 0.2;
  TreeGroup g;
  g.n_classes = 2;
  g.nodes.emplace_back();
  g.nodes[0].weights = {1.5, -0.5};
  e.rounds.push_back(g);
  const Matrix m = predict_margins(e, d);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(m(i, 0), 0.2 * 1.5);
    EXPECT_DOUBLE_EQ(m(i, 1), 0.2 * -0.5);
  }
}

TEST(TrainCentral, PredictionReproducesTrainingMargins) {
  const auto d = make_dataset({{0}, {1}, {2}, {3}}, {0, 0, 1, 1}, 2);
  TrainConfig cfg;
  cfg.rounds = 5;
  const auto run = train_central(d, cfg);
  EXPECT_EQ(predict_margins(run.ensemble, d), run.margins);
}

TEST(TrainCentral, ZeroRoundsGivesLogK) {
  const auto d = make_dataset({{0}, {1}, {2}}, {0, 1, 2}, 3);
  TrainConfig cfg;
  cfg.rounds = 0;
  const auto run = train_central(d, cfg);
  EXPECT_TRUE(run.ensemble.rounds.empty());
  ASSERT_EQ(run.objective.size(), 1u);
  EXPECT_NEAR(run.objective[0], std::log(3.0), 1e-15);
}

TEST(TrainCentral, SeparableObjectiveIsNonincreasing) {
  data::BlobSpec spec;
  spec.rows = 600;
  spec.features = 3;
  spec.classes = 2;
  spec.seed = 8;
  const auto d = data::make_blobs(spec).data;
  TrainConfig cfg;
  const auto run = train_central(d, cfg);
  for (std::size_t t = 1; t < run.objective.size(); ++t) {
    EXPECT_LE(run.objective[t], run.objective[t - 1]) << "round " << t;
  }
}

TEST(TrainCentral, SixteenClassBlobsFitTrainingData) {
  data::BlobSpec spec;
  const auto d = data::make_blobs(spec).data;
  const auto run = train_central(d, TrainConfig{});
  const auto pred = predict_labels(run.margins);
  EXPECT_GT(eval::accuracy(eval::confusion(d.labels, pred, d.n_classes)), 0.99);
}

TEST(FirstDivergence, ReportsNodeAndToleratesTinyWeightNoise) {
  const auto d = make_dataset({{0}, {1}, {2}, {3}}, {0, 0, 1, 1}, 2);
  const auto a = train_central(d, TrainConfig{}).ensemble;
  auto b = a;
  EXPECT_FALSE(first_divergence(a, b, 1e-12));
  b.rounds[0].nodes.back().weights[0] *= 1 + 1e-14;
  EXPECT_FALSE(first_divergence(a, b, 1e-12));
  b.rounds[0].nodes.back().weights[0] *= 1 + 1e-6;
  EXPECT_TRUE(first_divergence(a, b, 1e-12));
}

}  // namespace
}  // namespace fedscs::gbt
