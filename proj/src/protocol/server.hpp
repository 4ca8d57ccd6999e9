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

#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "gbt/dataset.hpp"
#include "protocol/messages.hpp"

namespace fedscs::protocol {

/// Deliberate protocol defects, used to check that verification notices them.
enum class Fault : uint8_t {
  kNone,
  kTieBreak,   // ties resolved toward the larger (feature, bin)
  kDoubleEta,  // deltas sent with eta already folded into the leaf weights
};

struct ServerConfig {
  gbt::TrainConfig train;
  int n_classes = 2;
  double rho = 0.001;
  SketchKind kind = SketchKind::kDDSketch;
  // Fraction of clients sampled per round (without replacement). 1 = all.
  double cohort_fraction = 1.0;
  // Virtual seconds a barrier may stay open.
  double barrier_timeout = std::numeric_limits<double>::infinity();
  Fault fault = Fault::kNone;

  void validate() const;
};

enum class Phase : uint8_t { kIdle, kAwaitSketches, kAwaitAtoms, kAwaitFinal, kDone };

const char* phase_name(Phase p);

struct Outbound {
  ClientId to;
  Message message;
};

/// What the server saw in one round; kept for verification.
struct RoundRecord {
  uint32_t round = 0;
  std::vector<ClientId> cohort;
  binning::EdgeSet edges;
  std::vector<sketch::DDSketch> merged_sketches;
  std::vector<sketch::ExactWeightedQuantiler> merged_exact;
  binning::AtomMap merged_atoms;
};

/// Event-driven coordinator. Never touches rows: it sees sketches, atoms and
/// loss sums only. Responses are buffered until the whole cohort has answered.
class Server {
 public:
  Server(ServerConfig config, std::vector<ClientId> clients);

  std::vector<Outbound> start(double now = 0.0);
  std::vector<Outbound> handle(ClientId from, const Message& message, double now = 0.0);

  /// Throws kBarrierTimeout when the open barrier is older than the timeout.
  void check_deadline(double now) const;

  Phase phase() const { return phase_; }
  uint32_t round() const { return round_; }
  const gbt::Ensemble& ensemble() const { return ensemble_; }
  /// J_0..J_T as mean log-loss; NaN where no report arrived (skipped rounds).
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<RoundRecord>& records() const { return records_; }
  std::vector<ClientId> pending() const;
  std::size_t n_features() const { return n_features_; }

  /// Grows one shared-structure tree group from merged atoms.
  static gbt::TreeGroup grow_from_atoms(const binning::AtomMap& atoms,
                                        const binning::EdgeSet& edges,
                                        const gbt::TrainConfig& config, Fault fault);

 private:
  std::vector<Outbound> begin_round(double now);
  std::vector<Outbound> finish(double now);
  std::vector<Outbound> on_sketches(double now);
  std::vector<Outbound> on_atoms(double now);
  std::vector<RoundDelta> deltas_for(ClientId c);
  std::vector<ClientId> sample_cohort() const;
  void expect_member(ClientId from, const char* what);

  ServerConfig config_;
  std::vector<ClientId> clients_;
  std::map<ClientId, uint32_t> synced_;  // last round each client has trees for
  Phase phase_ = Phase::kIdle;
  uint32_t round_ = 0;
  double opened_at_ = 0.0;
  std::vector<ClientId> cohort_;
  std::map<ClientId, SketchResp> sketches_;
  std::map<ClientId, AtomResp> atoms_;
  std::map<ClientId, FinalAck> acks_;
  std::size_t n_features_ = 0;
  bool features_known_ = false;
  gbt::Ensemble ensemble_;
  std::vector<double> objective_;
  std::vector<RoundRecord> records_;
};

}  // namespace fedscs::protocol
