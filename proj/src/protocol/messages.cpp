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

#include "protocol/messages.hpp"

namespace fedscs::protocol {

MessageType message_type(const Message& m) {
  return static_cast<MessageType>(m.index() + 1);
}

const char* message_type_name(MessageType t) {
  switch (t) {
    case MessageType::kSketchReq: return "SKETCH_REQ";
    case MessageType::kSketchResp: return "SKETCH_RESP";
    case MessageType::kAtomReq: return "ATOM_REQ";
    case MessageType::kAtomResp: return "ATOM_RESP";
    case MessageType::kModelFinal: return "MODEL_FINAL";
    case MessageType::kFinalAck: return "FINAL_ACK";
  }
  return "UNKNOWN";
}

uint32_t message_round(const Message& m) {
  return std::visit([](const auto& v) { return v.round; }, m);
}

}  // namespace fedscs::protocol
