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
#include <map>
#include <span>
#include <vector>

namespace fedscs::sketch {

/// Weighted DDSketch with relative value accuracy rho.
///
/// Positive values v land in bucket i = ceil(log(v) / log(g)) with
/// g = (1 + rho) / (1 - rho), i.e. g^(i-1) < v <= g^i. Negative values use a
/// mirrored map keyed by the index of |v|, and |v| <= kZeroThreshold goes to a
/// single zero band. Buckets are never collapsed.
///
/// The value order used for ranks is: negative buckets by descending index,
/// then the zero band, then positive buckets by ascending index. Total weight
/// is always summed in that order, which makes the cumulative weight at the
/// last bucket equal to total_weight() bit for bit.
class DDSketch {
 public:
  static constexpr double kZeroThreshold = 1e-12;
  static constexpr double kDefaultRelativeAccuracy = 0.001;

  explicit DDSketch(double relative_accuracy = kDefaultRelativeAccuracy);

  /// Rebuilds a sketch from raw bucket maps (used by the wire decoder).
  /// Throws kInvalidInput on a bad rho or non-positive/non-finite weights.
  static DDSketch from_buckets(double relative_accuracy, std::map<int64_t, double> positive,
                               std::map<int64_t, double> negative, double zero_weight);

  /// Adds `weight` at `value`. A zero weight leaves the sketch unchanged.
  void insert(double value, double weight = 1.0);

  /// Bucket-wise addition. Throws kInvalidInput if the accuracies differ.
  void merge(const DDSketch& other);

  /// Representative value of the first bucket whose cumulative weight reaches
  /// q * total_weight(). Throws kEmptySketch when the sketch holds no weight
  /// and kInvalidInput when q is outside [0, 1].
  double quantile(double q) const;

  /// Batch form of quantile(); `qs` must be non-decreasing.
  std::vector<double> quantiles(std::span<const double> qs) const;

  /// Split thresholds for histogram edges: the lower boundary of each hit
  /// bucket instead of its representative, so every value in the bucket
  /// routes right of the edge ("x < e" is false), as the stream value at the
  /// exact q-quantile does against an exact edge. Binning then matches exact
  /// binning whenever the hit bucket holds no smaller stream value. The bound
  /// is up to 2*rho/(1+rho) below the bucket's values, and the rank error is
  /// the same as quantiles().
  std::vector<double> split_points(std::span<const double> qs) const;

  /// Largest bucket weight fraction among the buckets hit by `qs`. Both the
  /// returned value and the exact q-quantile of the inserted stream lie in the
  /// hit bucket, so this bounds the rank (bracketing) error of every query.
  double rank_error_bound(std::span<const double> qs) const;

  double total_weight() const;
  bool empty() const { return positive_.empty() && negative_.empty() && zero_weight_ == 0.0; }

  double relative_accuracy() const { return relative_accuracy_; }
  double gamma() const { return gamma_; }

  int64_t bucket_index(double magnitude) const;
  double bucket_value(int64_t index) const;

  const std::map<int64_t, double>& positive_buckets() const { return positive_; }
  const std::map<int64_t, double>& negative_buckets() const { return negative_; }
  double zero_weight() const { return zero_weight_; }
  std::size_t num_buckets() const {
    return positive_.size() + negative_.size() + (zero_weight_ > 0.0 ? 1 : 0);
  }

  bool operator==(const DDSketch& other) const;

 private:
  struct Hit {
    double value;
    double lower;  // every bucket member is >= lower
    double weight;
  };
  // Visits buckets in rank order; stops when `fn` returns false.
  template <typename Fn>
  void for_each_bucket(Fn&& fn) const;
  std::vector<Hit> locate(std::span<const double> qs) const;

  double relative_accuracy_;
  double gamma_;
  double log_gamma_;
  std::map<int64_t, double> positive_;
  std::map<int64_t, double> negative_;
  double zero_weight_ = 0.0;
};

}  // namespace fedscs::sketch
