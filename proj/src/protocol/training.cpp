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

#include "protocol/training.hpp"

#include <limits>
#include <map>

namespace fedscs::protocol {

FedRun run_training(const ServerConfig& config, std::vector<Client>& clients,
                    transport::Transport& net, const RunOptions& options) {
  std::map<ClientId, Client*> by_id;
  std::vector<ClientId> ids;
  for (Client& c : clients) {
    require(c.data().n_classes == config.n_classes, ErrorCode::kConfig,
            "client class count does not match the configuration");
    if (!by_id.emplace(c.id(), &c).second) fail(ErrorCode::kConfig, "duplicate client id");
    ids.push_back(c.id());
  }
  Server server(config, ids);
  net.register_endpoint(kServerEndpoint);
  for (ClientId c : ids) net.register_endpoint(client_endpoint(c));

  FedRun run;
  auto dispatch = [&](std::vector<Outbound> out) {
    for (Outbound& o : out) net.send(kServerEndpoint, client_endpoint(o.to), std::move(o.message));
  };
  try {
    dispatch(server.start(net.now()));
    while (server.phase() != Phase::kDone) {
      auto delivery = net.poll();
      if (!delivery) {
        // Nothing in flight: the open barrier can only expire.
        server.check_deadline(std::numeric_limits<double>::infinity());
        fail(ErrorCode::kProtocol, "protocol stalled with nothing in flight");
      }
      ++run.messages;
      if (delivery->to == kServerEndpoint) {
        dispatch(server.handle(delivery->from - 1, delivery->message, delivery->time));
        continue;
      }
      const ClientId c = delivery->to - 1;
      if (options.silent.count(c)) continue;
      if (auto reply = by_id.at(c)->handle(delivery->message)) {
        net.send(delivery->to, kServerEndpoint, std::move(*reply));
      }
    }
  } catch (const Error& e) {
    run.aborted = true;
    run.error_code = e.code();
    run.error = e.what();
  }
  run.ensemble = server.ensemble();
  run.objective = server.objective();
  run.records = server.records();
  for (const Client& c : clients) {
    run.warnings.insert(run.warnings.end(), c.warnings().begin(), c.warnings().end());
  }
  return run;
}

}  // namespace fedscs::protocol
