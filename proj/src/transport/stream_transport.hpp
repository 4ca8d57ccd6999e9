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

#include <deque>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "transport/codec.hpp"
#include "transport/transport.hpp"

namespace fedscs::transport {

/// Moves framed bytes through per-pair byte pipes and reassembles them with a
/// FrameStreamDecoder, reading `chunk` bytes at a time. This is the path a
/// socket connection would take; the pipes stand in for the sockets.
/// The clock counts deliveries.
class StreamTransport : public Transport {
 public:
  explicit StreamTransport(std::size_t chunk = 4096);

  void register_endpoint(EndpointId id) override;
  void send(EndpointId from, EndpointId to, protocol::Message message) override;
  std::optional<Delivery> poll() override;
  double now() const override { return static_cast<double>(delivered_); }

  uint64_t bytes_sent() const { return bytes_sent_; }

 private:
  struct Pipe {
    std::deque<uint8_t> bytes;
    FrameStreamDecoder decoder;
  };
  void check(EndpointId id) const;

  std::size_t chunk_;
  uint64_t seq_ = 0;
  uint64_t delivered_ = 0;
  uint64_t bytes_sent_ = 0;
  std::set<EndpointId> endpoints_;
  std::map<std::pair<EndpointId, EndpointId>, Pipe> pipes_;
  std::deque<std::pair<EndpointId, EndpointId>> order_;  // one entry per frame sent
};

}  // namespace fedscs::transport
