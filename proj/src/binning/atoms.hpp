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
#include <span>
#include <vector>

#include "binning/edges.hpp"
#include "common.hpp"
#include "gbt/objective.hpp"

namespace fedscs::binning {

/// Sufficient statistics keyed by multi-feature bin vector ("atoms").
///
/// Stored flat and sorted: atom i has key keys[i*d .. i*d+d), count counts[i],
/// and per-class sums grad[i*K .. i*K+K), hess[i*K .. i*K+K). Keys are strictly
/// increasing in lexicographic order, so every reduction over atoms visits
/// them in the same order on every party.
struct AtomMap {
  uint32_t round = 0;
  uint32_t n_features = 0;
  uint32_t n_classes = 0;
  std::vector<uint16_t> keys;
  std::vector<uint64_t> counts;
  std::vector<double> grad;
  std::vector<double> hess;

  std::size_t size() const { return counts.size(); }
  bool empty() const { return counts.empty(); }
  std::span<const uint16_t> key(std::size_t i) const {
    return {keys.data() + i * n_features, n_features};
  }
  std::span<const double> grad_of(std::size_t i) const {
    return {grad.data() + i * n_classes, n_classes};
  }
  std::span<const double> hess_of(std::size_t i) const {
    return {hess.data() + i * n_classes, n_classes};
  }

  uint64_t total_count() const;
  /// Per-class totals, summed in key order.
  std::vector<double> total_grad() const;
  std::vector<double> total_hess() const;

  /// Structural checks used by the wire decoder: sizes, key order, W >= 1,
  /// finite statistics and non-negative Hessians.
  void validate() const;

  bool operator==(const AtomMap&) const = default;
};

/// Quantizes each row to its bin vector and sums (1, g, h) per occupied key.
AtomMap aggregate_atoms(const Matrix& features, const gbt::GradHess& gh, const EdgeSet& edges);

/// Key-wise sum. Throws kProtocol when maps disagree on round or shape.
AtomMap merge_atom_maps(std::span<const AtomMap> maps);

enum class Direction : uint8_t { kLeft, kRight };

struct PathStep {
  uint32_t feature;
  uint32_t bin;
  Direction direction;
};

/// Root-to-node split constraints. compile() turns them into per-feature
/// half-open bin ranges [lo, hi).
struct NodePath {
  std::vector<PathStep> steps;

  struct Ranges {
    std::vector<uint32_t> lo;
    std::vector<uint32_t> hi;
    bool contains(std::span<const uint16_t> key) const;
  };
  Ranges compile(std::size_t n_features) const;
};

struct SplitStats {
  std::vector<double> grad_left;
  std::vector<double> hess_left;
  std::vector<double> grad_right;
  std::vector<double> hess_right;
  uint64_t count_left = 0;
  uint64_t count_right = 0;
};

/// Left/right sums for candidate (feature, q) over atoms that satisfy `path`:
/// an atom goes left iff key[feature] < q. Atoms are visited in key order.
SplitStats prefix_stats(const AtomMap& atoms, const NodePath& path, std::size_t feature,
                        uint32_t q);

/// Per-node histogram: for each feature f and bin b the count and per-class
/// gradient/Hessian sums. Used by histogram split search on both the
/// centralized and the atom path.
class Histogram {
 public:
  Histogram(const EdgeSet& edges, std::size_t n_classes);

  void add(std::size_t feature, std::size_t bin, uint64_t count, std::span<const double> g,
           std::span<const double> h);

  std::size_t n_features() const { return offsets_.size() - 1; }
  std::size_t n_bins(std::size_t f) const { return offsets_[f + 1] - offsets_[f]; }
  std::size_t n_classes() const { return n_classes_; }
  std::span<const double> grad(std::size_t f, std::size_t b) const {
    return {grad_.data() + (offsets_[f] + b) * n_classes_, n_classes_};
  }
  std::span<const double> hess(std::size_t f, std::size_t b) const {
    return {hess_.data() + (offsets_[f] + b) * n_classes_, n_classes_};
  }
  uint64_t count(std::size_t f, std::size_t b) const { return counts_[offsets_[f] + b]; }

 private:
  std::size_t n_classes_;
  std::vector<std::size_t> offsets_;
  std::vector<uint64_t> counts_;
  std::vector<double> grad_;
  std::vector<double> hess_;
};

/// Histogram of the atoms listed in `atom_ids` (visited in the given order).
Histogram atom_histogram(const AtomMap& atoms, std::span<const uint32_t> atom_ids,
                         const EdgeSet& edges);

}  // namespace fedscs::binning
