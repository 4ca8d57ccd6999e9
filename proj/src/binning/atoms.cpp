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

#include "binning/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fedscs::binning {

namespace {

int compare_keys(std::span<const uint16_t> a, std::span<const uint16_t> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

void append_atom(AtomMap& m, std::span<const uint16_t> key) {
  m.keys.insert(m.keys.end(), key.begin(), key.end());
  m.counts.push_back(0);
  m.grad.resize(m.grad.size() + m.n_classes, 0.0);
  m.hess.resize(m.hess.size() + m.n_classes, 0.0);
}

void accumulate_last(AtomMap& m, uint64_t count, std::span<const double> g,
                     std::span<const double> h) {
  m.counts.back() += count;
  double* gd = m.grad.data() + m.grad.size() - m.n_classes;
  double* hd = m.hess.data() + m.hess.size() - m.n_classes;
  for (std::size_t k = 0; k < m.n_classes; ++k) {
    gd[k] += g[k];
    hd[k] += h[k];
  }
}

}  // namespace

uint64_t AtomMap::total_count() const {
  return std::accumulate(counts.begin(), counts.end(), uint64_t{0});
}

std::vector<double> AtomMap::total_grad() const {
  std::vector<double> t(n_classes, 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t k = 0; k < n_classes; ++k) t[k] += grad[i * n_classes + k];
  }
  return t;
}

std::vector<double> AtomMap::total_hess() const {
  std::vector<double> t(n_classes, 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t k = 0; k < n_classes; ++k) t[k] += hess[i * n_classes + k];
  }
  return t;
}

void AtomMap::validate() const {
  const std::size_t n = counts.size();
  require(keys.size() == n * n_features, ErrorCode::kInvalidInput, "atom key block size");
  require(grad.size() == n * n_classes && hess.size() == n * n_classes,
          ErrorCode::kInvalidInput, "atom statistic block size");
  for (std::size_t i = 0; i < n; ++i) {
    require(counts[i] >= 1, ErrorCode::kInvalidInput, "atom count must be >= 1");
    if (i > 0) {
      require(compare_keys(key(i - 1), key(i)) < 0, ErrorCode::kInvalidInput,
              "atom keys must be strictly increasing");
    }
  }
  for (double v : grad) require(std::isfinite(v), ErrorCode::kInvalidInput, "non-finite G");
  for (double v : hess) {
    require(std::isfinite(v) && v >= 0.0, ErrorCode::kInvalidInput, "H must be finite, >= 0");
  }
}

AtomMap aggregate_atoms(const Matrix& features, const gbt::GradHess& gh, const EdgeSet& edges) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  require(edges.n_features() == d, ErrorCode::kInvalidInput,
          "edge set feature count does not match data");
  require(gh.n_rows() == n, ErrorCode::kInvalidInput, "gradient rows do not match data");
  AtomMap out;
  out.round = edges.round;
  out.n_features = static_cast<uint32_t>(d);
  out.n_classes = static_cast<uint32_t>(gh.n_classes());

  std::vector<uint16_t> row_keys(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = features.row(i);
    for (std::size_t f = 0; f < d; ++f) {
      row_keys[i * d + f] = static_cast<uint16_t>(edges.bin(f, x[f]));
    }
  }
  auto key_of = [&](std::size_t i) {
    return std::span<const uint16_t>(row_keys.data() + i * d, d);
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare_keys(key_of(a), key_of(b)) < 0;
  });
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t i = order[pos];
    if (pos == 0 || compare_keys(key_of(order[pos - 1]), key_of(i)) != 0) {
      append_atom(out, key_of(i));
    }
    accumulate_last(out, 1, gh.g.row(i), gh.h.row(i));
  }
  return out;
}

AtomMap merge_atom_maps(std::span<const AtomMap> maps) {
  AtomMap out;
  if (maps.empty()) return out;
  out.round = maps[0].round;
  out.n_features = maps[0].n_features;
  out.n_classes = maps[0].n_classes;
  struct Ref {
    std::size_t map;
    std::size_t atom;
  };
  std::vector<Ref> refs;
  for (std::size_t m = 0; m < maps.size(); ++m) {
    if (maps[m].round != out.round) fail(ErrorCode::kProtocol, "atom maps from different rounds");
    if (maps[m].n_features != out.n_features || maps[m].n_classes != out.n_classes) {
      fail(ErrorCode::kProtocol, "atom maps with different shapes");
    }
    for (std::size_t i = 0; i < maps[m].size(); ++i) refs.push_back({m, i});
  }
  // Stable: equal keys are summed in map order.
  std::stable_sort(refs.begin(), refs.end(), [&](const Ref& a, const Ref& b) {
    return compare_keys(maps[a.map].key(a.atom), maps[b.map].key(b.atom)) < 0;
  });
  for (std::size_t pos = 0; pos < refs.size(); ++pos) {
    const AtomMap& src = maps[refs[pos].map];
    const std::size_t i = refs[pos].atom;
    if (pos == 0 ||
        compare_keys(maps[refs[pos - 1].map].key(refs[pos - 1].atom), src.key(i)) != 0) {
      append_atom(out, src.key(i));
    }
    accumulate_last(out, src.counts[i], src.grad_of(i), src.hess_of(i));
  }
  return out;
}

NodePath::Ranges NodePath::compile(std::size_t n_features) const {
  Ranges r;
  r.lo.assign(n_features, 0);
  r.hi.assign(n_features, std::numeric_limits<uint32_t>::max());
  for (const PathStep& s : steps) {
    require(s.feature < n_features, ErrorCode::kInvalidInput, "path feature out of range");
    if (s.direction == Direction::kLeft) {
      r.hi[s.feature] = std::min(r.hi[s.feature], s.bin);
    } else {
      r.lo[s.feature] = std::max(r.lo[s.feature], s.bin);
    }
  }
  return r;
}

bool NodePath::Ranges::contains(std::span<const uint16_t> key) const {
  for (std::size_t f = 0; f < key.size(); ++f) {
    if (key[f] < lo[f] || key[f] >= hi[f]) return false;
  }
  return true;
}

SplitStats prefix_stats(const AtomMap& atoms, const NodePath& path, std::size_t feature,
                        uint32_t q) {
  require(feature < atoms.n_features, ErrorCode::kInvalidInput, "feature out of range");
  const std::size_t k = atoms.n_classes;
  SplitStats s;
  s.grad_left.assign(k, 0.0);
  s.hess_left.assign(k, 0.0);
  s.grad_right.assign(k, 0.0);
  s.hess_right.assign(k, 0.0);
  const auto ranges = path.compile(atoms.n_features);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    auto key = atoms.key(i);
    if (!ranges.contains(key)) continue;
    const bool left = key[feature] < q;
    auto& g = left ? s.grad_left : s.grad_right;
    auto& h = left ? s.hess_left : s.hess_right;
    (left ? s.count_left : s.count_right) += atoms.counts[i];
    for (std::size_t c = 0; c < k; ++c) {
      g[c] += atoms.grad[i * k + c];
      h[c] += atoms.hess[i * k + c];
    }
  }
  return s;
}

Histogram::Histogram(const EdgeSet& edges, std::size_t n_classes) : n_classes_(n_classes) {
  offsets_.resize(edges.n_features() + 1, 0);
  for (std::size_t f = 0; f < edges.n_features(); ++f) {
    offsets_[f + 1] = offsets_[f] + edges.n_bins(f);
  }
  counts_.assign(offsets_.back(), 0);
  grad_.assign(offsets_.back() * n_classes, 0.0);
  hess_.assign(offsets_.back() * n_classes, 0.0);
}

void Histogram::add(std::size_t feature, std::size_t bin, uint64_t count,
                    std::span<const double> g, std::span<const double> h) {
  const std::size_t slot = offsets_[feature] + bin;
  counts_[slot] += count;
  double* gd = grad_.data() + slot * n_classes_;
  double* hd = hess_.data() + slot * n_classes_;
  for (std::size_t k = 0; k < n_classes_; ++k) {
    gd[k] += g[k];
    hd[k] += h[k];
  }
}

Histogram atom_histogram(const AtomMap& atoms, std::span<const uint32_t> atom_ids,
                         const EdgeSet& edges) {
  require(edges.n_features() == atoms.n_features, ErrorCode::kInvalidInput,
          "edge set and atoms disagree on feature count");
  Histogram hist(edges, atoms.n_classes);
  for (uint32_t i : atom_ids) {
    auto key = atoms.key(i);
    for (std::size_t f = 0; f < atoms.n_features; ++f) {
      require(key[f] < edges.n_bins(f), ErrorCode::kProtocol, "atom key outside the edge set");
      hist.add(f, key[f], atoms.counts[i], atoms.grad_of(i), atoms.hess_of(i));
    }
  }
  return hist;
}

}  // namespace fedscs::binning
