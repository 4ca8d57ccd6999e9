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
#include <string>
#include <variant>
#include <vector>

#include "binning/atoms.hpp"
#include "binning/edges.hpp"
#include "gbt/tree.hpp"
#include "sketch/ddsketch.hpp"
#include "sketch/exact_quantiler.hpp"

namespace fedscs::protocol {

using ClientId = uint32_t;

enum class SketchKind : uint8_t {
  kDDSketch = 0,
  // Raw (value, weight) lists. Realizes the alpha -> 0 limit for equivalence
  // testing; it is not privacy preserving.
  kExact = 1,
};

/// Raw-weight trees of one finished round plus the shrinkage the client must
/// apply when adding them to its margins.
struct RoundDelta {
  uint32_t round = 0;
  double eta = 0.0;
  gbt::TreeGroup trees;
  bool operator==(const RoundDelta&) const = default;
};

struct SketchReq {
  uint32_t round = 0;
  uint32_t bins = 0;
  double rho = 0.0;
  SketchKind kind = SketchKind::kDDSketch;
  std::vector<RoundDelta> deltas;
  bool operator==(const SketchReq&) const = default;
};

struct SketchResp {
  uint32_t round = 0;
  ClientId client = 0;
  SketchKind kind = SketchKind::kDDSketch;
  std::vector<sketch::DDSketch> sketches;              // kDDSketch
  std::vector<sketch::ExactWeightedQuantiler> exact;   // kExact
  bool operator==(const SketchResp&) const = default;
};

struct AtomReq {
  uint32_t round = 0;
  std::vector<RoundDelta> deltas;
  binning::EdgeSet edges;
  bool operator==(const AtomReq&) const = default;
};

struct AtomResp {
  uint32_t round = 0;
  ClientId client = 0;
  // Local log-loss sum at the margins the atoms were computed from, for
  // objective tracking without moving labels.
  double loss_sum = 0.0;
  uint64_t n_rows = 0;
  binning::AtomMap atoms;
  bool operator==(const AtomResp&) const = default;
};

struct ModelFinal {
  uint32_t round = 0;
  gbt::Ensemble ensemble;
  bool operator==(const ModelFinal&) const = default;
};

struct FinalAck {
  uint32_t round = 0;
  ClientId client = 0;
  double loss_sum = 0.0;
  uint64_t n_rows = 0;
  bool operator==(const FinalAck&) const = default;
};

using Message = std::variant<SketchReq, SketchResp, AtomReq, AtomResp, ModelFinal, FinalAck>;

enum class MessageType : uint8_t {
  kSketchReq = 1,
  kSketchResp = 2,
  kAtomReq = 3,
  kAtomResp = 4,
  kModelFinal = 5,
  kFinalAck = 6,
};

MessageType message_type(const Message& m);
const char* message_type_name(MessageType t);
uint32_t message_round(const Message& m);

}  // namespace fedscs::protocol
