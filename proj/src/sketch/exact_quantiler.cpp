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

#include "sketch/exact_quantiler.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace fedscs::sketch {

namespace {

bool entry_less(const ExactWeightedQuantiler::Entry& a, const ExactWeightedQuantiler::Entry& b) {
  return a.value < b.value || (a.value == b.value && a.weight < b.weight);
}

void check_entry(double value, double weight) {
  require(std::isfinite(value), ErrorCode::kInvalidInput, "quantiler value must be finite");
  require(std::isfinite(weight) && weight >= 0.0, ErrorCode::kInvalidInput,
          "quantiler weight must be finite and non-negative");
}

}  // namespace

ExactWeightedQuantiler::ExactWeightedQuantiler(std::span<const double> values,
                                               std::span<const double> weights) {
  require(values.size() == weights.size(), ErrorCode::kInvalidInput,
          "values and weights differ in length");
  entries_.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    check_entry(values[i], weights[i]);
    if (weights[i] > 0.0) entries_.push_back({values[i], weights[i]});
  }
  std::sort(entries_.begin(), entries_.end(), entry_less);
  rebuild_prefix();
}

ExactWeightedQuantiler ExactWeightedQuantiler::from_sorted(std::vector<Entry> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    check_entry(entries[i].value, entries[i].weight);
    require(entries[i].weight > 0.0, ErrorCode::kInvalidInput,
            "quantiler entries must carry positive weight");
    require(i == 0 || !entry_less(entries[i], entries[i - 1]), ErrorCode::kInvalidInput,
            "quantiler entries must be sorted");
  }
  ExactWeightedQuantiler q;
  q.entries_ = std::move(entries);
  q.rebuild_prefix();
  return q;
}

void ExactWeightedQuantiler::rebuild_prefix() {
  prefix_.resize(entries_.size());
  double cum = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    cum += entries_[i].weight;
    prefix_[i] = cum;
  }
}

void ExactWeightedQuantiler::insert(double value, double weight) {
  check_entry(value, weight);
  if (weight == 0.0) return;
  Entry e{value, weight};
  entries_.insert(std::upper_bound(entries_.begin(), entries_.end(), e, entry_less), e);
  rebuild_prefix();
}

void ExactWeightedQuantiler::merge(const ExactWeightedQuantiler& other) {
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + other.entries_.size());
  std::merge(entries_.begin(), entries_.end(), other.entries_.begin(), other.entries_.end(),
             std::back_inserter(merged), entry_less);
  entries_ = std::move(merged);
  rebuild_prefix();
}

double ExactWeightedQuantiler::quantile(double q) const {
  const double qs[1] = {q};
  return quantiles(qs).front();
}

std::vector<double> ExactWeightedQuantiler::quantiles(std::span<const double> qs) const {
  if (empty()) fail(ErrorCode::kEmptySketch, "quantile of an empty quantiler");
  const double total = total_weight();
  std::vector<double> out;
  out.reserve(qs.size());
  for (double q : qs) {
    require(q >= 0.0 && q <= 1.0, ErrorCode::kInvalidInput, "quantile must lie in [0, 1]");
    const double rank = q * total;
    auto it = std::lower_bound(prefix_.begin(), prefix_.end(), rank);
    if (it == prefix_.end()) --it;
    out.push_back(entries_[static_cast<std::size_t>(it - prefix_.begin())].value);
  }
  return out;
}

double ExactWeightedQuantiler::mass_at_or_below(double v) const {
  auto it = std::upper_bound(entries_.begin(), entries_.end(), v,
                             [](double x, const Entry& e) { return x < e.value; });
  const auto n = static_cast<std::size_t>(it - entries_.begin());
  return n == 0 ? 0.0 : prefix_[n - 1];
}

double ExactWeightedQuantiler::mass_below(double v) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Entry& e, double x) { return e.value < x; });
  const auto n = static_cast<std::size_t>(it - entries_.begin());
  return n == 0 ? 0.0 : prefix_[n - 1];
}

}  // namespace fedscs::sketch
