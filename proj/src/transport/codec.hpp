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
#include <span>
#include <vector>

#include "protocol/messages.hpp"

namespace fedscs::transport {

// Frame layout (all integers little-endian, floats as IEEE-754 binary64 bits):
//   'F' 'X' | version u8 | type u8 | payload length u32 | payload
inline constexpr uint8_t kFrameMagic0 = 'F';
inline constexpr uint8_t kFrameMagic1 = 'X';
inline constexpr uint8_t kWireVersion = 1;
inline constexpr std::size_t kFrameHeaderSize = 8;
inline constexpr uint32_t kMaxPayload = 256u << 20;

std::vector<uint8_t> encode(const protocol::Message& message);

/// Decodes exactly one frame. Throws kFrame on truncation, trailing bytes,
/// unknown type or version, or any structurally invalid payload.
protocol::Message decode(std::span<const uint8_t> frame);

/// Incremental decoder for a byte stream carrying back-to-back frames.
class FrameStreamDecoder {
 public:
  void feed(std::span<const uint8_t> bytes);
  /// Next complete message, or nullopt if more bytes are needed.
  std::optional<protocol::Message> next();
  std::size_t buffered() const { return buffer_.size() - offset_; }

 private:
  std::vector<uint8_t> buffer_;
  std::size_t offset_ = 0;
};

}  // namespace fedscs::transport
