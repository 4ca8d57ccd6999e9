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
#include <optional>

#include "protocol/messages.hpp"

namespace fedscs::transport {

using EndpointId = uint32_t;

struct Delivery {
  uint64_t seq = 0;
  double time = 0.0;
  EndpointId from = 0;
  EndpointId to = 0;
  protocol::Message message;
};

/// Reliable, per-pair FIFO message passing between registered endpoints.
class Transport {
 public:
  virtual ~Transport() = default;
  /// Throws kInvalidEndpoint if the id is already registered.
  virtual void register_endpoint(EndpointId id) = 0;
  /// Throws kInvalidEndpoint for unregistered sender or receiver.
  virtual void send(EndpointId from, EndpointId to, protocol::Message message) = 0;
  /// Next message in delivery order, or nullopt when nothing is in flight.
  virtual std::optional<Delivery> poll() = 0;
  /// Current (virtual) time: the time of the last delivery.
  virtual double now() const = 0;
};

}  // namespace fedscs::transport
