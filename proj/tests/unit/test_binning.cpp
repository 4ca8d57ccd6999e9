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

#include "binning/atoms.hpp"
#include "binning/edges.hpp"
#include "data/synth.hpp"
#include "expect_error.hpp"
#include "gbt/train.hpp"
#include "generators.hpp"
#include "protocol/server.hpp"
#include "sketch/ddsketch.hpp"
#include "sketch/exact_quantiler.hpp"

namespace fedscs::binning {
namespace {

using testing::Rng;

gbt::GradHess random_grad_hess(Rng& rng, const gbt::Dataset& d) {
  Matrix margins(d.n_rows(), static_cast<std::size_t>(d.n_classes));
  std::normal_distribution<double> noise(0.0, 1.0);
  for (double& v : margins.data()) v = noise(rng);
  gbt::GradHess gh = gbt::softmax_grad_hess(margins, d.labels);
  gbt::quantize(gh);
  return gh;
}

gbt::Dataset small_blobs(Rng& rng, std::size_t rows, int features, int classes) {
  data::BlobSpec spec;
  spec.rows = rows;
  spec.features = features;
  spec.classes = classes;
  spec.discrete = 1;
  spec.spread = 2.0;
  spec.seed = rng();
  return data::make_blobs(spec).data;
}

TEST(BinIndex, ClampsAndPlacesEdgeValuesRight) {
  const std::vector<double> e = {1.0, 2.0, 4.0};
  EXPECT_EQ(bin_index(e, -5.0), 0u);
  EXPECT_EQ(bin_index(e, 1.0), 0u);
  EXPECT_EQ(bin_index(e, 2.0), 1u);
  EXPECT_EQ(bin_index(e, 3.9), 1u);
  EXPECT_EQ(bin_index(e, 4.0), 2u);
  EXPECT_EQ(bin_index(e, 1e9), 2u);
  EXPECT_EQ(bin_index(std::vector<double>{}, 3.0), 0u);
  EXPECT_FEDSCS_ERROR(bin_index(e, std::nan("")), ErrorCode::kInvalidInput);
}

TEST(BinIndex, AgreesWithThresholdRouting) {
  Rng rng(1);
  for (int draw = 0; draw < 100000; ++draw) {
    const auto edges = testing::random_edges(rng, 1, 12);
    const auto& e = edges.edges[0];
    if (e.empty()) continue;
    // Half the draws land exactly on an edge.
    const double x = rng() % 2 ? e[rng() % e.size()] : testing::uniform(rng, -60.0, 110.0);
    const uint32_t b = bin_index(e, x);
    for (std::size_t q = 1; q < e.size(); ++q) {
      ASSERT_EQ(b < q, x < e[q]) << "x " << x << " q " << q;
    }
  }
}

TEST(BuildEdges, UniformHundredQuartiles) {
  std::vector<double> v, w;
  for (int i = 1; i <= 100; ++i) {
    v.push_back(i);
    w.push_back(1.0);
  }
  const std::vector<sketch::ExactWeightedQuantiler> per_feature = {{v, w}};
  const EdgeSet e = build_edges<sketch::ExactWeightedQuantiler>(per_feature, 4, 1);
  EXPECT_EQ(e.edges[0], (std::vector<double>{1, 25, 50, 75, 100}));
  EXPECT_EQ(e.n_bins(0), 5u);
}

TEST(BuildEdges, DegenerateFeatures) {
  const std::vector<double> v = {3.0, 3.0, 3.0};
  const std::vector<double> w = {1.0, 2.0, 0.5};
  std::vector<sketch::ExactWeightedQuantiler> per_feature = {{v, w}, {}};
  const EdgeSet e = build_edges<sketch::ExactWeightedQuantiler>(per_feature, 16, 2);
  EXPECT_EQ(e.edges[0].size(), 1u);
  EXPECT_EQ(e.n_bins(0), 1u);
  EXPECT_TRUE(e.edges[1].empty());
  EXPECT_EQ(e.n_bins(1), 1u);
  EXPECT_EQ(e.round, 2u);
}

TEST(BuildEdges, SketchEdgesStrictlyIncreasing) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    sketch::DDSketch s(testing::uniform(rng, 1e-4, 0.05));
    const int n = testing::uniform_int(rng, 1, 3000);
    for (int i = 0; i < n; ++i) {
      s.insert(std::round(testing::uniform(rng, -30, 30) * 4) / 4, testing::uniform(rng, 0, 1));
    }
    const std::vector<sketch::DDSketch> per_feature = {s};
    const EdgeSet e = build_edges<sketch::DDSketch>(per_feature, 64, 1);
    EXPECT_NO_THROW(e.validate());
    EXPECT_LE(e.edges[0].size(), 65u);
  }
}

TEST(Atoms, SingleSampleAndCollision) {
  gbt::Dataset d;
  d.n_classes = 2;
  d.features = Matrix(2, 2);
  d.features(0, 0) = 0.5;
  d.features(0, 1) = 5.0;
  d.features(1, 0) = 0.7;
  d.features(1, 1) = 6.0;
  d.labels = {0, 1};
  gbt::GradHess gh = gbt::softmax_grad_hess(Matrix(2, 2), d.labels);
  EdgeSet edges;
  edges.edges = {{0.0, 1.0}, {0.0, 10.0}};

  const std::size_t first[1] = {0};
  const auto one = aggregate_atoms(d.subset(first).features, gbt::GradHess{
      Matrix(1, 2), Matrix(1, 2)}, edges);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.counts[0], 1u);

  const auto both = aggregate_atoms(d.features, gh, edges);
  ASSERT_EQ(both.size(), 1u) << "both rows share bin vector (0, 0)";
  EXPECT_EQ(both.counts[0], 2u);
  EXPECT_DOUBLE_EQ(both.grad_of(0)[0], gh.g(0, 0) + gh.g(1, 0));
  EXPECT_DOUBLE_EQ(both.hess_of(0)[1], gh.h(0, 1) + gh.h(1, 1));
}

TEST(Atoms, TotalsEqualColumnSums) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = small_blobs(rng, 1500, 5, 6);
    const auto gh = random_grad_hess(rng, d);
    const auto edges = gbt::exact_edges(d.features, gbt::hessian_weights(gh), 32, 1);
    const auto atoms = aggregate_atoms(d.features, gh, edges);
    EXPECT_NO_THROW(atoms.validate());
    EXPECT_EQ(atoms.total_count(), d.n_rows());
    const auto tg = atoms.total_grad();
    const auto th = atoms.total_hess();
    for (int c = 0; c < d.n_classes; ++c) {
      double g = 0.0, h = 0.0;
      for (std::size_t i = 0; i < d.n_rows(); ++i) {
        g += gh.g(i, c);
        h += gh.h(i, c);
      }
      EXPECT_NEAR(tg[c], g, 1e-9 * std::max(1.0, std::abs(g)));
      EXPECT_NEAR(th[c], h, 1e-9 * std::max(1.0, std::abs(h)));
    }
  }
}

TEST(Atoms, MergeIsPartitionInvariant) {
  Rng rng(4);
  const auto d = small_blobs(rng, 2000, 4, 5);
  const auto gh = random_grad_hess(rng, d);
  const auto edges = gbt::exact_edges(d.features, gbt::hessian_weights(gh), 64, 3);
  const auto pooled = aggregate_atoms(d.features, gh, edges);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = testing::uniform_int(rng, 1, 8);
    std::vector<std::vector<std::size_t>> parts(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < d.n_rows(); ++i) parts[rng() % k].push_back(i);
    std::vector<AtomMap> maps;
    for (const auto& rows : parts) {
      gbt::GradHess sub{Matrix(rows.size(), 5), Matrix(rows.size(), 5)};
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (int c = 0; c < 5; ++c) {
          sub.g(r, c) = gh.g(rows[r], c);
          sub.h(r, c) = gh.h(rows[r], c);
        }
      }
      maps.push_back(aggregate_atoms(d.subset(rows).features, sub, edges));
    }
    // Quantized statistics make the merged sums exact.
    EXPECT_EQ(merge_atom_maps(maps), pooled);
    std::reverse(maps.begin(), maps.end());
    EXPECT_EQ(merge_atom_maps(maps), pooled);
  }
  AtomMap empty = pooled;
  empty.keys.clear();
  empty.counts.clear();
  empty.grad.clear();
  empty.hess.clear();
  const AtomMap with_empty[2] = {pooled, empty};
  EXPECT_EQ(merge_atom_maps(with_empty), pooled);
}

TEST(Atoms, MergeRejectsRoundMismatch) {
  Rng rng(5);
  auto a = testing::random_atoms(rng, 10, 3, 2, false);
  auto b = a;
  b.round = a.round + 1;
  const AtomMap maps[2] = {a, b};
  EXPECT_FEDSCS_ERROR(merge_atom_maps(maps), ErrorCode::kProtocol);
}

TEST(PrefixStats, BoundaryAndSingleAtom) {
  AtomMap a;
  a.n_features = 2;
  a.n_classes = 1;
  a.keys = {2, 0};
  a.counts = {3};
  a.grad = {1.5};
  a.hess = {0.75};
  const NodePath root;
  const auto s = prefix_stats(a, root, 0, 3);
  EXPECT_EQ(s.count_left, 3u);
  EXPECT_EQ(s.grad_left[0], 1.5);
  EXPECT_EQ(s.count_right, 0u);
  EXPECT_EQ(s.grad_right[0], 0.0);
  const auto r = prefix_stats(a, root, 0, 2);
  EXPECT_EQ(r.count_right, 3u);
}

TEST(PrefixStats, SidesSumToNodeTotals) {
  Rng rng(6);
  const auto atoms = testing::random_atoms(rng, 400, 3, 4, false);
  NodePath path;
  path.steps.push_back({1, 100, Direction::kLeft});
  path.steps.push_back({2, 30, Direction::kRight});
  const auto ranges = path.compile(3);
  std::vector<double> g(4, 0.0), h(4, 0.0);
  uint64_t w = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!ranges.contains(atoms.key(i))) continue;
    EXPECT_LT(atoms.key(i)[1], 100);
    EXPECT_GE(atoms.key(i)[2], 30);
    w += atoms.counts[i];
    for (int c = 0; c < 4; ++c) {
      g[c] += atoms.grad_of(i)[c];
      h[c] += atoms.hess_of(i)[c];
    }
  }
  for (uint32_t q = 1; q < 256; q += 17) {
    const auto s = prefix_stats(atoms, path, 0, q);
    EXPECT_EQ(s.count_left + s.count_right, w);
    for (int c = 0; c < 4; ++c) {
      EXPECT_NEAR(s.grad_left[c] + s.grad_right[c], g[c], 1e-9 * std::max(1.0, std::abs(g[c])));
      EXPECT_NEAR(s.hess_left[c] + s.hess_right[c], h[c], 1e-9 * std::max(1.0, h[c]));
    }
  }
}

TEST(NodePath, IntervalsNarrow) {
  NodePath p;
  p.steps = {{0, 10, Direction::kLeft}, {0, 4, Direction::kRight}, {0, 8, Direction::kLeft}};
  const auto r = p.compile(2);
  EXPECT_EQ(r.lo[0], 4u);
  EXPECT_EQ(r.hi[0], 8u);
  const uint16_t in[2] = {5, 99};
  const uint16_t out[2] = {8, 0};
  EXPECT_TRUE(r.contains(in));
  EXPECT_FALSE(r.contains(out));
}

// Training the histogram engine on one pseudo-row per atom (at the left edge
// of each bin, carrying the atom's summed statistics) must give the tree the
// server grows from the atoms directly.
TEST(AtomPseudoDataset, CentralEngineMatchesAtomGrowth) {
  Rng rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    const int k = testing::uniform_int(rng, 2, 6);
    const auto d = small_blobs(rng, 800 + rng() % 1200, testing::uniform_int(rng, 2, 6), k);
    const auto gh = random_grad_hess(rng, d);
    const int bins = trial % 2 ? 300 : 32;
    const auto edges = gbt::exact_edges(d.features, gbt::hessian_weights(gh), bins, 1);
    const auto atoms = aggregate_atoms(d.features, gh, edges);

    Matrix rep(atoms.size(), d.n_features());
    gbt::GradHess agh{Matrix(atoms.size(), static_cast<std::size_t>(k)),
                      Matrix(atoms.size(), static_cast<std::size_t>(k))};
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      for (std::size_t f = 0; f < d.n_features(); ++f) {
        const auto& e = edges.edges[f];
        rep(i, f) = e.empty() ? 0.0 : e[atoms.key(i)[f]];
      }
      for (int c = 0; c < k; ++c) {
        agh.g(i, c) = atoms.grad_of(i)[c];
        agh.h(i, c) = atoms.hess_of(i)[c];
      }
    }
    gbt::TrainConfig cfg;
    const auto central = gbt::grow_tree_group(rep, agh, edges, cfg);
    const auto direct = gbt::grow_tree_group(d.features, gh, edges, cfg);
    const auto server =
        protocol::Server::grow_from_atoms(atoms, edges, cfg, protocol::Fault::kNone);
    EXPECT_EQ(central, server) << "trial " << trial;
    EXPECT_EQ(direct, server) << "trial " << trial;
  }
}

}  // namespace
}  // namespace fedscs::binning
