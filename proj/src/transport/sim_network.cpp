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

#include "transport/sim_network.hpp"

#include <algorithm>
#include <cmath>

#include "transport/codec.hpp"

namespace fedscs::transport {

SimNetwork::SimNetwork(uint64_t seed, LatencyModel latency, bool through_codec)
    : rng_(seed), latency_(latency), through_codec_(through_codec) {
  require(std::isfinite(latency.base) && latency.base >= 0.0 && std::isfinite(latency.jitter) &&
              latency.jitter >= 0.0,
          ErrorCode::kConfig, "latency must be finite and non-negative");
}

void SimNetwork::check(EndpointId id) const {
  if (!endpoints_.count(id)) {
    fail(ErrorCode::kInvalidEndpoint, "unknown endpoint " + std::to_string(id));
  }
}

void SimNetwork::register_endpoint(EndpointId id) {
  if (!endpoints_.insert(id).second) {
    fail(ErrorCode::kInvalidEndpoint, "endpoint " + std::to_string(id) + " already registered");
  }
}

void SimNetwork::send(EndpointId from, EndpointId to, protocol::Message message) {
  check(from);
  check(to);
  std::size_t bytes = 0;
  if (through_codec_) {
    const auto frame = encode(message);
    bytes = frame.size();
    message = decode(frame);
  }
  double delay = latency_.base;
  if (latency_.jitter > 0.0) {
    delay += std::uniform_real_distribution<double>(0.0, latency_.jitter)(rng_);
  }
  double& last = last_delivery_[{from, to}];
  const double at = std::max(now_ + delay, last);
  last = at;
  bytes_sent_ += bytes;
  queue_.push(Event{at, seq_++, from, to, now_, bytes, std::move(message)});
}

std::optional<Delivery> SimNetwork::poll() {
  if (queue_.empty()) return std::nullopt;
  Event e = queue_.top();
  queue_.pop();
  now_ = std::max(now_, e.time);
  log_.push_back(LogEntry{e.seq, e.sent, now_, e.from, e.to, protocol::message_type(e.message),
                          protocol::message_round(e.message), e.bytes});
  return Delivery{e.seq, now_, e.from, e.to, std::move(e.message)};
}

void SimNetwork::advance(double seconds) {
  require(seconds >= 0.0, ErrorCode::kInvalidInput, "cannot move the clock backwards");
  now_ += seconds;
}

}  // namespace fedscs::transport
