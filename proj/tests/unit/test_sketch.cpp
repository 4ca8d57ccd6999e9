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

#include "expect_error.hpp"

#include "sketch/calibration.hpp"
#include "sketch/ddsketch.hpp"
#include "sketch/exact_quantiler.hpp"

namespace fedscs::sketch {
namespace {

constexpr double kRho = 0.001;

std::vector<double> all_levels() { return edge_levels(64); }

void expect_close(const std::vector<double>& a, const std::vector<double>& b, double rel) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i], b[i], rel * std::max(1.0, std::abs(b[i]))) << "index " << i;
  }
}

struct Stream {
  std::vector<double> values;
  std::vector<double> weights;
};

Stream random_stream(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> val(0.0, 20.0);
  std::uniform_real_distribution<double> w(0.0, 0.25);
  Stream s;
  for (std::size_t i = 0; i < n; ++i) {
    s.values.push_back(rng() % 5 == 0 ? std::round(val(rng)) : val(rng));
    s.weights.push_back(w(rng));
  }
  return s;
}

TEST(DDSketch, BucketIndexCoversValue) {
  DDSketch s(0.01);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> logv(-30.0, 30.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::exp(logv(rng));
    const int64_t idx = s.bucket_index(v);
    EXPECT_LT(std::pow(s.gamma(), static_cast<double>(idx - 1)), v * (1 + 1e-12));
    EXPECT_GE(std::pow(s.gamma(), static_cast<double>(idx)), v * (1 - 1e-12));
    EXPECT_LE(std::abs(s.bucket_value(idx) - v) / v, 0.01 * (1 + 1e-9));
  }
}

TEST(DDSketch, ZeroWeightIsNoOp) {
  DDSketch a(kRho), b(kRho);
  a.insert(3.0, 1.0);
  b.insert(3.0, 1.0);
  b.insert(1e6, 0.0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.quantiles(all_levels()), b.quantiles(all_levels()));
}

TEST(DDSketch, RejectsBadInput) {
  DDSketch s(kRho);
  EXPECT_FEDSCS_ERROR(s.insert(1.0, -1.0), ErrorCode::kInvalidInput);
  EXPECT_FEDSCS_ERROR(s.insert(std::numeric_limits<double>::infinity()), ErrorCode::kInvalidInput);
  EXPECT_FEDSCS_ERROR(s.quantile(0.5), ErrorCode::kEmptySketch);
  s.insert(1.0);
  EXPECT_FEDSCS_ERROR(s.quantile(1.5), ErrorCode::kInvalidInput);
  EXPECT_FEDSCS_ERROR(DDSketch bad(1.5), ErrorCode::kInvalidInput);
  DDSketch other(0.01);
  EXPECT_FEDSCS_ERROR(s.merge(other), ErrorCode::kInvalidInput);
}

TEST(DDSketch, PointMass) {
  DDSketch s(kRho);
  for (int i = 0; i < 1000; ++i) s.insert(5.0, 1.0);
  for (double q : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    EXPECT_LE(std::abs(s.quantile(q) - 5.0), kRho * 5.0 * (1 + 1e-12)) << q;
  }
}

TEST(DDSketch, UniformMedianWithinRho) {
  DDSketch s(kRho);
  for (int v = 1; v <= 100; ++v) s.insert(v, 1.0);
  // The bound is tight at bucket boundaries, so allow rounding.
  const double slack = 1 + 1e-12;
  EXPECT_LE(std::abs(s.quantile(0.5) - 50.0), kRho * 50.0 * slack);
  EXPECT_LE(std::abs(s.quantile(0.0) - 1.0), kRho * slack);
  EXPECT_LE(std::abs(s.quantile(1.0) - 100.0), kRho * 100.0 * slack);
}

TEST(DDSketch, NegativeAndZeroValuesOrderCorrectly) {
  DDSketch s(kRho);
  const double vals[] = {-50.0, -2.0, 0.0, 1e-13, 3.0, 70.0};
  for (double v : vals) s.insert(v, 1.0);
  const double qs[] = {0.0, 1.0 / 6, 2.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6, 1.0};
  const auto out = s.quantiles(qs);
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_LE(out[i - 1], out[i]);
  EXPECT_NEAR(out[0], -50.0, 50.0 * kRho);
  EXPECT_EQ(out[3], 0.0);  // 0 and 1e-13 share the zero band
  EXPECT_NEAR(out[6], 70.0, 70.0 * kRho);
}

TEST(DDSketch, MergeLaws) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sa = random_stream(rng, 500);
    const auto sb = random_stream(rng, 300);
    DDSketch a(kRho), b(kRho), pooled(kRho), empty(kRho);
    for (std::size_t i = 0; i < sa.values.size(); ++i) {
      a.insert(sa.values[i], sa.weights[i]);
      pooled.insert(sa.values[i], sa.weights[i]);
    }
    for (std::size_t i = 0; i < sb.values.size(); ++i) {
      b.insert(sb.values[i], sb.weights[i]);
      pooled.insert(sb.values[i], sb.weights[i]);
    }
    DDSketch ab = a, ba = b, a0 = a;
    ab.merge(b);
    ba.merge(a);
    a0.merge(empty);
    EXPECT_EQ(a0.quantiles(all_levels()), a.quantiles(all_levels()));
    expect_close(ab.quantiles(all_levels()), ba.quantiles(all_levels()), 1e-9);
    expect_close(ab.quantiles(all_levels()), pooled.quantiles(all_levels()), 1e-9);
    EXPECT_NEAR(ab.total_weight(), a.total_weight() + b.total_weight(),
                1e-12 * ab.total_weight());
  }
}

TEST(DDSketch, EightWayPartitionMatchesPooled) {
  std::mt19937_64 rng(3);
  const auto s = random_stream(rng, 4000);
  DDSketch pooled(kRho);
  std::vector<DDSketch> parts(8, DDSketch(kRho));
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    pooled.insert(s.values[i], s.weights[i]);
    parts[rng() % 8].insert(s.values[i], s.weights[i]);
  }
  DDSketch merged(kRho);
  for (const auto& p : parts) merged.merge(p);
  expect_close(merged.quantiles(all_levels()), pooled.quantiles(all_levels()), 1e-9);
  expect_close(merged.split_points(all_levels()), pooled.split_points(all_levels()), 1e-9);
}

TEST(DDSketch, SplitPointsBoundTheirBucketFromBelow) {
  std::mt19937_64 rng(4);
  const auto s = random_stream(rng, 2000);
  DDSketch sk(0.01);
  for (std::size_t i = 0; i < s.values.size(); ++i) sk.insert(s.values[i], s.weights[i]);
  const auto reps = sk.quantiles(all_levels());
  const auto lows = sk.split_points(all_levels());
  for (std::size_t b = 0; b < reps.size(); ++b) {
    EXPECT_LT(lows[b], reps[b]);
    // Within 2 rho / (1 + rho) of the bucket's values.
    EXPECT_LE(std::abs(reps[b] - lows[b]), 2 * 0.01 * std::max(std::abs(reps[b]), 1e-12) + 1e-12);
  }
}

TEST(DDSketch, SplitPointsReproduceExactBinningOnSparseValues) {
  // With one stream value per bucket, "x < edge" classifies every value the
  // way the exact left-quantile edge does.
  std::vector<double> values, weights;
  for (int v = -60; v <= 100; ++v) {
    values.push_back(v);
    weights.push_back(0.1 + 0.01 * ((v * 7) % 5 + 5));
  }
  DDSketch sk(1e-4);
  for (std::size_t i = 0; i < values.size(); ++i) sk.insert(values[i], weights[i]);
  const ExactWeightedQuantiler exact(values, weights);
  const auto levels = edge_levels(16);
  const auto approx = sk.split_points(levels);
  const auto ideal = exact.quantiles(levels);
  for (std::size_t b = 0; b < levels.size(); ++b) {
    for (double v : values) EXPECT_EQ(v < approx[b], v < ideal[b]) << "edge " << b << " x " << v;
  }
}

TEST(DDSketch, CertifiedBoundBracketsExactCdf) {
  std::mt19937_64 rng(5);
  const auto levels = all_levels();
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_stream(rng, 200 + rng() % 2000);
    for (double rho : {0.02, 0.001}) {
      DDSketch sk(rho);
      for (std::size_t i = 0; i < s.values.size(); ++i) sk.insert(s.values[i], s.weights[i]);
      const ExactWeightedQuantiler exact(s.values, s.weights);
      const double alpha = sk.rank_error_bound(levels);
      EXPECT_LE(bracketing_error(exact, sk.split_points(levels), 64), alpha + 1e-12);
      EXPECT_LE(bracketing_error(exact, sk.quantiles(levels), 64), alpha + 1e-12);
    }
  }
}

TEST(Calibration, MeetsTargetOnCalibrationStream) {
  std::mt19937_64 rng(6);
  const auto s = random_stream(rng, 3000);
  const auto cal = calibrate_rho(s.values, s.weights, 0.02, 64);
  EXPECT_TRUE(cal.satisfied);
  EXPECT_LE(cal.measured_alpha, 0.02);
  EXPECT_EQ(cal.measured_alpha, measured_rank_error(s.values, s.weights, cal.rho, 64));
  // An unreachable target falls back to the finest rung.
  const auto hard = calibrate_rho(s.values, s.weights, 1e-9, 64);
  EXPECT_FALSE(hard.satisfied);
  EXPECT_EQ(hard.rho, default_rho_ladder().back());
}

TEST(ExactQuantiler, LeftQuantileByHand) {
  const double v[] = {1, 2, 3, 4};
  const double w[] = {1, 1, 1, 1};
  const ExactWeightedQuantiler q(v, w);
  EXPECT_EQ(q.quantile(0.5), 2.0);
  EXPECT_EQ(q.quantile(0.0), 1.0);
  EXPECT_EQ(q.quantile(0.51), 3.0);
  EXPECT_EQ(q.quantile(1.0), 4.0);
}

TEST(ExactQuantiler, SinglePairAndZeroWeight) {
  const double v1[] = {7.5};
  const double w1[] = {2.0};
  const ExactWeightedQuantiler single(v1, w1);
  for (double q : {0.01, 0.5, 1.0}) EXPECT_EQ(single.quantile(q), 7.5);
  const double v2[] = {1.0, 2.0};
  const double w2[] = {0.0, 1.0};
  const ExactWeightedQuantiler z(v2, w2);
  for (double q : {0.01, 0.5, 1.0}) EXPECT_EQ(z.quantile(q), 2.0);
  EXPECT_FEDSCS_ERROR(ExactWeightedQuantiler().quantile(0.5), ErrorCode::kEmptySketch);
}

TEST(ExactQuantiler, MergeEqualsPooled) {
  std::mt19937_64 rng(7);
  const auto s = random_stream(rng, 1000);
  ExactWeightedQuantiler pooled(s.values, s.weights), merged;
  for (int part = 0; part < 4; ++part) {
    std::vector<double> v, w;
    for (std::size_t i = static_cast<std::size_t>(part); i < s.values.size(); i += 4) {
      v.push_back(s.values[i]);
      w.push_back(s.weights[i]);
    }
    merged.merge(ExactWeightedQuantiler(v, w));
  }
  EXPECT_EQ(merged.entries(), pooled.entries());
  EXPECT_EQ(merged.quantiles(all_levels()), pooled.quantiles(all_levels()));
}

TEST(ExactQuantiler, CdfAtQuantileBracketsLevel) {
  std::mt19937_64 rng(8);
  const auto s = random_stream(rng, 500);
  const ExactWeightedQuantiler q(s.values, s.weights);
  const auto levels = all_levels();
  EXPECT_LE(bracketing_error(q, q.quantiles(levels), 64), 1e-12);
}

}  // namespace
}  // namespace fedscs::sketch
