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

#include <set>
#include <string>
#include <vector>

#include "protocol/client.hpp"
#include "protocol/server.hpp"
#include "transport/transport.hpp"

namespace fedscs::protocol {

inline constexpr transport::EndpointId kServerEndpoint = 0;
inline transport::EndpointId client_endpoint(ClientId c) { return c + 1; }

struct FedRun {
  gbt::Ensemble ensemble;
  std::vector<double> objective;  // J_0..J_T, NaN where unknown
  std::vector<RoundRecord> records;
  std::vector<std::string> warnings;
  uint64_t messages = 0;
  // Set when the run stopped early; `ensemble` then holds the finished rounds.
  bool aborted = false;
  ErrorCode error_code = ErrorCode::kProtocol;
  std::string error;
};

struct RunOptions {
  // Clients that swallow every request (simulated crash).
  std::set<ClientId> silent;
};

/// Drives one server and the given clients over `net` until the final model
/// is acknowledged or an error stops the run.
FedRun run_training(const ServerConfig& config, std::vector<Client>& clients,
                    transport::Transport& net, const RunOptions& options = {});

}  // namespace fedscs::protocol
