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

#include <optional>
#include <string>
#include <vector>

#include "gbt/dataset.hpp"
#include "protocol/messages.hpp"

namespace fedscs::protocol {

/// A data-holding party. Keeps margins for its local rows and answers server
/// requests with sketches or atom summaries; raw rows never leave it (except
/// in the exact-quantiler oracle mode).
class Client {
 public:
  Client(ClientId id, gbt::Dataset data);

  /// Dispatches one server message. Returns nullopt for stale messages (older
  /// than the latest round seen), which are ignored with a recorded warning.
  /// Throws kProtocol on malformed or unexpected requests.
  std::optional<Message> handle(const Message& message);

  ClientId id() const { return id_; }
  const gbt::Dataset& data() const { return data_; }
  const Matrix& margins() const { return margins_; }
  uint32_t last_applied_round() const { return last_applied_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  bool stale(uint32_t round, const char* what);
  void apply(const RoundDelta& delta);
  void apply_all(const std::vector<RoundDelta>& deltas);
  SketchResp answer(const SketchReq& req);
  AtomResp answer(const AtomReq& req);
  FinalAck answer(const ModelFinal& req);

  ClientId id_;
  gbt::Dataset data_;
  Matrix margins_;
  uint32_t last_applied_ = 0;
  uint32_t last_seen_ = 0;
  std::vector<std::string> warnings_;
};

}  // namespace fedscs::protocol
