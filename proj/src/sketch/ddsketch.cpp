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

#include "sketch/ddsketch.hpp"

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace fedscs::sketch {

namespace {

void check_accuracy(double rho) {
  require(rho > 0.0 && rho < 1.0, ErrorCode::kInvalidInput,
          "relative accuracy must lie in (0, 1)");
}

void check_q(double q) {
  require(q >= 0.0 && q <= 1.0, ErrorCode::kInvalidInput, "quantile must lie in [0, 1]");
}

}  // namespace

DDSketch::DDSketch(double relative_accuracy)
    : relative_accuracy_(relative_accuracy),
      gamma_((1.0 + relative_accuracy) / (1.0 - relative_accuracy)),
      log_gamma_(std::log(gamma_)) {
  check_accuracy(relative_accuracy);
}

DDSketch DDSketch::from_buckets(double relative_accuracy, std::map<int64_t, double> positive,
                                std::map<int64_t, double> negative, double zero_weight) {
  check_accuracy(relative_accuracy);
  auto check_map = [](const std::map<int64_t, double>& m) {
    for (const auto& [idx, w] : m) {
      require(std::isfinite(w) && w > 0.0, ErrorCode::kInvalidInput,
              "bucket weights must be finite and positive");
    }
  };
  check_map(positive);
  check_map(negative);
  require(std::isfinite(zero_weight) && zero_weight >= 0.0, ErrorCode::kInvalidInput,
          "zero-band weight must be finite and non-negative");
  DDSketch s(relative_accuracy);
  s.positive_ = std::move(positive);
  s.negative_ = std::move(negative);
  s.zero_weight_ = zero_weight;
  return s;
}

int64_t DDSketch::bucket_index(double magnitude) const {
  return static_cast<int64_t>(std::ceil(std::log(magnitude) / log_gamma_));
}

double DDSketch::bucket_value(int64_t index) const {
  // Midpoint in relative terms: within rho of every value in (g^(i-1), g^i].
  return 2.0 * std::exp(static_cast<double>(index) * log_gamma_) / (gamma_ + 1.0);
}

void DDSketch::insert(double value, double weight) {
  require(std::isfinite(value), ErrorCode::kInvalidInput, "sketch value must be finite");
  require(std::isfinite(weight) && weight >= 0.0, ErrorCode::kInvalidInput,
          "sketch weight must be finite and non-negative");
  if (weight == 0.0) return;
  if (std::abs(value) <= kZeroThreshold) {
    zero_weight_ += weight;
  } else if (value > 0.0) {
    positive_[bucket_index(value)] += weight;
  } else {
    negative_[bucket_index(-value)] += weight;
  }
}

void DDSketch::merge(const DDSketch& other) {
  require(other.relative_accuracy_ == relative_accuracy_, ErrorCode::kInvalidInput,
          "cannot merge sketches with different relative accuracy");
  for (const auto& [idx, w] : other.positive_) positive_[idx] += w;
  for (const auto& [idx, w] : other.negative_) negative_[idx] += w;
  zero_weight_ += other.zero_weight_;
}

template <typename Fn>
void DDSketch::for_each_bucket(Fn&& fn) const {
  for (auto it = negative_.rbegin(); it != negative_.rend(); ++it) {
    const double upper = std::exp(static_cast<double>(it->first) * log_gamma_);
    if (!fn(Hit{-bucket_value(it->first), -upper, it->second})) return;
  }
  if (zero_weight_ > 0.0) {
    if (!fn(Hit{0.0, -kZeroThreshold, zero_weight_})) return;
  }
  for (const auto& [idx, w] : positive_) {
    const double lower = std::exp(static_cast<double>(idx - 1) * log_gamma_);
    if (!fn(Hit{bucket_value(idx), lower, w})) return;
  }
}

double DDSketch::total_weight() const {
  double total = 0.0;
  for_each_bucket([&](const Hit& h) {
    total += h.weight;
    return true;
  });
  return total;
}

std::vector<DDSketch::Hit> DDSketch::locate(std::span<const double> qs) const {
  if (empty()) fail(ErrorCode::kEmptySketch, "quantile of an empty sketch");
  for (std::size_t i = 0; i < qs.size(); ++i) {
    check_q(qs[i]);
    require(i == 0 || qs[i - 1] <= qs[i], ErrorCode::kInvalidInput,
            "batched quantiles must be non-decreasing");
  }
  const double total = total_weight();
  std::vector<Hit> hits;
  hits.reserve(qs.size());
  std::size_t next = 0;
  double cum = 0.0;
  Hit last{0.0, 0.0, 0.0};
  for_each_bucket([&](const Hit& h) {
    cum += h.weight;
    last = h;
    while (next < qs.size() && cum >= qs[next] * total) {
      hits.push_back(last);
      ++next;
    }
    return next < qs.size();
  });
  // Rounding can leave q * total a hair above the final cumulative sum.
  while (hits.size() < qs.size()) hits.push_back(last);
  return hits;
}

double DDSketch::quantile(double q) const {
  const double qs[1] = {q};
  return locate(qs).front().value;
}

std::vector<double> DDSketch::quantiles(std::span<const double> qs) const {
  std::vector<double> out;
  out.reserve(qs.size());
  for (const Hit& h : locate(qs)) out.push_back(h.value);
  return out;
}

std::vector<double> DDSketch::split_points(std::span<const double> qs) const {
  std::vector<double> out;
  out.reserve(qs.size());
  for (const Hit& h : locate(qs)) out.push_back(h.lower);
  return out;
}

double DDSketch::rank_error_bound(std::span<const double> qs) const {
  const double total = total_weight();
  double worst = 0.0;
  for (const Hit& h : locate(qs)) worst = std::max(worst, h.weight / total);
  return worst;
}

bool DDSketch::operator==(const DDSketch& other) const {
  return relative_accuracy_ == other.relative_accuracy_ && positive_ == other.positive_ &&
         negative_ == other.negative_ && zero_weight_ == other.zero_weight_;
}

}  // namespace fedscs::sketch
