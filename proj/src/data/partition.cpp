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

#include "data/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace fedscs::data {

namespace {

template <typename T>
T parse_number(const std::string& s, const std::string& whole) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    fail(ErrorCode::kConfig, "bad partition mode '" + whole + "'");
  }
  return v;
}

std::vector<std::string> split_colons(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ':')) out.push_back(part);
  return out;
}

void check_count(int k, std::size_t n) {
  if (k < 1) fail(ErrorCode::kPartition, "client count must be >= 1");
  if (static_cast<std::size_t>(k) > n) {
    fail(ErrorCode::kPartition, "client count " + std::to_string(k) + " exceeds row count " +
                                    std::to_string(n));
  }
}

Partition by_id(const Table& table) {
  if (!table.has_ids()) fail(ErrorCode::kPartition, "id partitioning needs an id column");
  Partition out;
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    auto [it, inserted] = slot.emplace(table.ids[i], out.rows.size());
    if (inserted) {
      out.rows.emplace_back();
      out.names.push_back(table.ids[i]);
    }
    out.rows[it->second].push_back(i);
  }
  return out;
}

Partition iid(std::size_t n, int k, uint64_t seed) {
  check_count(k, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  Partition out;
  out.rows.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) out.rows[i % out.rows.size()].push_back(order[i]);
  return out;
}

Partition label_skew(const gbt::Dataset& data, int k, double alpha, uint64_t seed) {
  const std::size_t n = data.n_rows();
  check_count(k, n);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorCode::kPartition, "Dirichlet alpha must be positive");
  }
  const auto kk = static_cast<std::size_t>(k);
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(data.n_classes));
  for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);

  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(alpha, 1.0);
  Partition out;
  out.rows.resize(kk);
  std::vector<double> p(kk);
  for (auto& rows : by_class) {
    std::shuffle(rows.begin(), rows.end(), rng);
    double total = 0.0;
    for (double& v : p) total += (v = gamma(rng));
    if (!(total > 0.0)) {
      std::fill(p.begin(), p.end(), 1.0);
      total = static_cast<double>(kk);
    }
    double cum = 0.0;
    std::size_t start = 0;
    for (std::size_t c = 0; c < kk; ++c) {
      cum += p[c];
      const std::size_t end = c + 1 == kk ? rows.size()
                                          : std::min(rows.size(), static_cast<std::size_t>(std::llround(
                                                                      cum / total * rows.size())));
      for (std::size_t i = start; i < std::max(start, end); ++i) out.rows[c].push_back(rows[i]);
      start = std::max(start, end);
    }
  }
  // No client may be empty: move one row from the currently largest client.
  for (auto& rows : out.rows) {
    if (!rows.empty()) continue;
    auto largest = std::max_element(out.rows.begin(), out.rows.end(),
                                    [](const auto& a, const auto& b) { return a.size() < b.size(); });
    rows.push_back(largest->back());
    largest->pop_back();
  }
  return out;
}

}  // namespace

PartitionSpec parse_partition(const std::string& text, uint64_t seed) {
  PartitionSpec spec;
  spec.seed = seed;
  const auto parts = split_colons(text);
  if (parts.empty()) fail(ErrorCode::kConfig, "empty partition mode");
  if (parts[0] == "id" && parts.size() == 1) {
    spec.mode = PartitionMode::kById;
  } else if (parts[0] == "iid" && parts.size() == 2) {
    spec.mode = PartitionMode::kIid;
    spec.clients = parse_number<int>(parts[1], text);
  } else if (parts[0] == "skew" && (parts.size() == 2 || parts.size() == 3)) {
    spec.mode = PartitionMode::kLabelSkew;
    spec.clients = parse_number<int>(parts[1], text);
    if (parts.size() == 3) spec.alpha = parse_number<double>(parts[2], text);
  } else {
    fail(ErrorCode::kConfig, "bad partition mode '" + text + "' (expected id, iid:K or skew:K[:ALPHA])");
  }
  return spec;
}

std::string format_partition(const PartitionSpec& spec) {
  std::ostringstream os;
  switch (spec.mode) {
    case PartitionMode::kById: os << "id"; break;
    case PartitionMode::kIid: os << "iid:" << spec.clients; break;
    case PartitionMode::kLabelSkew: os << "skew:" << spec.clients << ':' << spec.alpha; break;
  }
  return os.str();
}

Partition partition_clients(const Table& table, const PartitionSpec& spec) {
  Partition out;
  switch (spec.mode) {
    case PartitionMode::kById: out = by_id(table); break;
    case PartitionMode::kIid: out = iid(table.data.n_rows(), spec.clients, spec.seed); break;
    case PartitionMode::kLabelSkew:
      out = label_skew(table.data, spec.clients, spec.alpha, spec.seed);
      break;
  }
  for (auto& rows : out.rows) std::sort(rows.begin(), rows.end());
  if (out.names.empty()) {
    for (std::size_t c = 0; c < out.rows.size(); ++c) out.names.push_back("client-" + std::to_string(c));
  }
  return out;
}

}  // namespace fedscs::data
