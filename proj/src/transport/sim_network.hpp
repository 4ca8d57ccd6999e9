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

#include <map>
#include <queue>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "transport/transport.hpp"

namespace fedscs::transport {

struct LatencyModel {
  double base = 0.0;    // seconds added to every message
  double jitter = 0.0;  // uniform extra delay in [0, jitter)
};

struct LogEntry {
  uint64_t seq;
  double sent;
  double delivered;
  EndpointId from;
  EndpointId to;
  protocol::MessageType type;
  uint32_t round;
  std::size_t bytes;  // encoded frame size

  bool operator==(const LogEntry&) const = default;
};

/// Deterministic in-process network on a virtual clock. Each message is
/// optionally pushed through the wire codec so every hop exercises it.
class SimNetwork : public Transport {
 public:
  explicit SimNetwork(uint64_t seed = 0, LatencyModel latency = {}, bool through_codec = true);

  void register_endpoint(EndpointId id) override;
  void send(EndpointId from, EndpointId to, protocol::Message message) override;
  std::optional<Delivery> poll() override;
  double now() const override { return now_; }

  /// Advances the clock without delivering (used to expire barriers).
  void advance(double seconds);
  std::size_t in_flight() const { return queue_.size(); }
  const std::vector<LogEntry>& log() const { return log_; }
  uint64_t bytes_sent() const { return bytes_sent_; }

 private:
  struct Event {
    double time;
    uint64_t seq;
    EndpointId from;
    EndpointId to;
    double sent;
    std::size_t bytes;
    protocol::Message message;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  void check(EndpointId id) const;

  std::mt19937_64 rng_;
  LatencyModel latency_;
  bool through_codec_;
  double now_ = 0.0;
  uint64_t seq_ = 0;
  uint64_t bytes_sent_ = 0;
  std::set<EndpointId> endpoints_;
  std::map<std::pair<EndpointId, EndpointId>, double> last_delivery_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::vector<LogEntry> log_;
};

}  // namespace fedscs::transport
