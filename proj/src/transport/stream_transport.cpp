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

#include "transport/stream_transport.hpp"

#include <algorithm>

namespace fedscs::transport {

StreamTransport::StreamTransport(std::size_t chunk) : chunk_(chunk) {
  require(chunk >= 1, ErrorCode::kConfig, "chunk size must be positive");
}

void StreamTransport::check(EndpointId id) const {
  if (!endpoints_.count(id)) {
    fail(ErrorCode::kInvalidEndpoint, "unknown endpoint " + std::to_string(id));
  }
}

void StreamTransport::register_endpoint(EndpointId id) {
  if (!endpoints_.insert(id).second) {
    fail(ErrorCode::kInvalidEndpoint, "endpoint " + std::to_string(id) + " already registered");
  }
}

void StreamTransport::send(EndpointId from, EndpointId to, protocol::Message message) {
  check(from);
  check(to);
  const auto frame = encode(message);
  bytes_sent_ += frame.size();
  Pipe& pipe = pipes_[{from, to}];
  pipe.bytes.insert(pipe.bytes.end(), frame.begin(), frame.end());
  order_.emplace_back(from, to);
}

std::optional<Delivery> StreamTransport::poll() {
  if (order_.empty()) return std::nullopt;
  const auto [from, to] = order_.front();
  order_.pop_front();
  Pipe& pipe = pipes_.at({from, to});
  std::vector<uint8_t> buf;
  while (true) {
    if (auto m = pipe.decoder.next()) {
      ++delivered_;
      return Delivery{seq_++, now(), from, to, std::move(*m)};
    }
    if (pipe.bytes.empty()) fail(ErrorCode::kFrame, "byte stream ended inside a frame");
    const std::size_t n = std::min(chunk_, pipe.bytes.size());
    buf.assign(pipe.bytes.begin(), pipe.bytes.begin() + static_cast<std::ptrdiff_t>(n));
    pipe.bytes.erase(pipe.bytes.begin(), pipe.bytes.begin() + static_cast<std::ptrdiff_t>(n));
    pipe.decoder.feed(buf);
  }
}

}  // namespace fedscs::transport
