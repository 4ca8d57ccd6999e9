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

#include "common.hpp"

#include <charconv>
#include <cmath>

namespace fedscs {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kEmptySketch: return "EmptySketch";
    case ErrorCode::kIngest: return "IngestError";
    case ErrorCode::kPartition: return "PartitionError";
    case ErrorCode::kProtocol: return "ProtocolError";
    case ErrorCode::kFrame: return "FrameError";
    case ErrorCode::kInvalidEndpoint: return "InvalidEndpoint";
    case ErrorCode::kBarrierTimeout: return "BarrierTimeout";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Unknown";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace fedscs
