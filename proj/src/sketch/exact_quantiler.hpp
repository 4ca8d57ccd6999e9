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
#include <utility>
#include <vector>

namespace fedscs::sketch {

/// Exact weighted empirical distribution of a stream.
///
/// Entries are kept sorted by (value, weight); zero weights are dropped since
/// they carry no mass. quantile(q) implements the left-quantile
/// inf{v : F(v) >= q} restricted to the support, with F(v) the weighted CDF.
class ExactWeightedQuantiler {
 public:
  struct Entry {
    double value;
    double weight;
    bool operator==(const Entry&) const = default;
  };

  ExactWeightedQuantiler() = default;
  ExactWeightedQuantiler(std::span<const double> values, std::span<const double> weights);

  /// Wire decoder entry point; entries must already be sorted and positive.
  static ExactWeightedQuantiler from_sorted(std::vector<Entry> entries);

  void insert(double value, double weight);
  void merge(const ExactWeightedQuantiler& other);

  double quantile(double q) const;
  std::vector<double> quantiles(std::span<const double> qs) const;
  /// Histogram edges: the quantiles themselves.
  std::vector<double> split_points(std::span<const double> qs) const { return quantiles(qs); }

  /// Total weight of entries with value <= v, and with value < v.
  double mass_at_or_below(double v) const;
  double mass_below(double v) const;
  /// F(v) and F(v-).
  double cdf(double v) const { return mass_at_or_below(v) / total_weight(); }
  double cdf_below(double v) const { return mass_below(v) / total_weight(); }

  double total_weight() const { return prefix_.empty() ? 0.0 : prefix_.back(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }

  bool operator==(const ExactWeightedQuantiler& other) const {
    return entries_ == other.entries_;
  }

 private:
  void rebuild_prefix();

  std::vector<Entry> entries_;
  std::vector<double> prefix_;
};

}  // namespace fedscs::sketch
