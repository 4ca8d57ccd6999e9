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

#include "protocol/server.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "gbt/objective.hpp"

namespace fedscs::protocol {

void ServerConfig::validate() const {
  train.validate();
  require(n_classes >= 1, ErrorCode::kConfig, "n_classes must be >= 1");
  require(std::isfinite(rho) && rho > 0.0 && rho < 1.0, ErrorCode::kConfig,
          "rho must lie in (0, 1)");
  require(cohort_fraction > 0.0 && cohort_fraction <= 1.0, ErrorCode::kConfig,
          "cohort fraction must lie in (0, 1]");
  require(barrier_timeout > 0.0, ErrorCode::kConfig, "barrier timeout must be positive");
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::kIdle: return "idle";
    case Phase::kAwaitSketches: return "await-sketches";
    case Phase::kAwaitAtoms: return "await-atoms";
    case Phase::kAwaitFinal: return "await-final";
    case Phase::kDone: return "done";
  }
  return "unknown";
}

Server::Server(ServerConfig config, std::vector<ClientId> clients)
    : config_(std::move(config)), clients_(std::move(clients)) {
  config_.validate();
  std::sort(clients_.begin(), clients_.end());
  require(std::adjacent_find(clients_.begin(), clients_.end()) == clients_.end(),
          ErrorCode::kConfig, "duplicate client id");
  require(!clients_.empty(), ErrorCode::kConfig, "at least one client is required");
  for (ClientId c : clients_) synced_[c] = 0;
  ensemble_.n_classes = config_.n_classes;
  ensemble_.eta = config_.train.eta;
  objective_.assign(static_cast<std::size_t>(config_.train.rounds) + 1,
                    std::numeric_limits<double>::quiet_NaN());
}

std::vector<ClientId> Server::pending() const {
  std::vector<ClientId> out;
  auto missing = [&](const auto& got, const std::vector<ClientId>& from) {
    for (ClientId c : from) {
      if (!got.count(c)) out.push_back(c);
    }
  };
  switch (phase_) {
    case Phase::kAwaitSketches: missing(sketches_, cohort_); break;
    case Phase::kAwaitAtoms: missing(atoms_, cohort_); break;
    case Phase::kAwaitFinal: missing(acks_, clients_); break;
    default: break;
  }
  return out;
}

void Server::check_deadline(double now) const {
  if (phase_ == Phase::kIdle || phase_ == Phase::kDone) return;
  if (now - opened_at_ <= config_.barrier_timeout) return;
  std::ostringstream os;
  os << "barrier timeout in round " << round_ << " (" << phase_name(phase_)
     << "); missing clients:";
  for (ClientId c : pending()) os << ' ' << c;
  fail(ErrorCode::kBarrierTimeout, os.str());
}

std::vector<ClientId> Server::sample_cohort() const {
  if (config_.cohort_fraction >= 1.0) return clients_;
  const auto size = static_cast<std::size_t>(
      std::llround(config_.cohort_fraction * static_cast<double>(clients_.size())));
  std::mt19937_64 rng(config_.train.seed ^ (0x9E3779B97F4A7C15ULL * round_));
  std::vector<ClientId> out;
  std::sample(clients_.begin(), clients_.end(), std::back_inserter(out), size, rng);
  return out;
}

std::vector<RoundDelta> Server::deltas_for(ClientId c) {
  std::vector<RoundDelta> out;
  uint32_t& synced = synced_[c];
  for (uint32_t r = synced + 1; r <= ensemble_.rounds.size(); ++r) {
    RoundDelta delta{r, ensemble_.eta, ensemble_.rounds[r - 1]};
    if (config_.fault == Fault::kDoubleEta) {
      for (auto& node : delta.trees.nodes) {
        for (double& w : node.weights) w *= ensemble_.eta;
      }
    }
    out.push_back(std::move(delta));
  }
  synced = static_cast<uint32_t>(ensemble_.rounds.size());
  return out;
}

std::vector<Outbound> Server::start(double now) {
  require(phase_ == Phase::kIdle, ErrorCode::kProtocol, "server already started");
  round_ = 0;
  return begin_round(now);
}

std::vector<Outbound> Server::begin_round(double now) {
  std::vector<Outbound> out;
  while (true) {
    ++round_;
    if (round_ > static_cast<uint32_t>(config_.train.rounds)) return finish(now);
    cohort_ = sample_cohort();
    if (!cohort_.empty()) break;
    // Nobody sampled: the model is unchanged for this round.
    ensemble_.rounds.push_back(gbt::TreeGroup{config_.n_classes, {}});
  }
  sketches_.clear();
  atoms_.clear();
  phase_ = Phase::kAwaitSketches;
  opened_at_ = now;
  for (ClientId c : cohort_) {
    SketchReq req;
    req.round = round_;
    req.bins = static_cast<uint32_t>(config_.train.bins);
    req.rho = config_.rho;
    req.kind = config_.kind;
    req.deltas = deltas_for(c);
    out.push_back({c, std::move(req)});
  }
  return out;
}

std::vector<Outbound> Server::finish(double now) {
  phase_ = Phase::kAwaitFinal;
  round_ = static_cast<uint32_t>(config_.train.rounds);
  opened_at_ = now;
  acks_.clear();
  std::vector<Outbound> out;
  for (ClientId c : clients_) out.push_back({c, ModelFinal{round_, ensemble_}});
  return out;
}

void Server::expect_member(ClientId from, const char* what) {
  if (!std::binary_search(clients_.begin(), clients_.end(), from) ||
      (phase_ != Phase::kAwaitFinal &&
       std::find(cohort_.begin(), cohort_.end(), from) == cohort_.end())) {
    fail(ErrorCode::kProtocol, std::string(what) + " from client " + std::to_string(from) +
                                   " outside the round cohort");
  }
}

std::vector<Outbound> Server::handle(ClientId from, const Message& message, double now) {
  check_deadline(now);
  const MessageType type = message_type(message);
  const uint32_t round = message_round(message);
  auto wrong = [&]() -> std::vector<Outbound> {
    std::ostringstream os;
    os << "unexpected " << message_type_name(type) << " for round " << round << " from client "
       << from << " while " << phase_name(phase_) << " in round " << round_;
    fail(ErrorCode::kProtocol, os.str());
  };

  if (const auto* m = std::get_if<SketchResp>(&message)) {
    if (phase_ != Phase::kAwaitSketches || m->round != round_) return wrong();
    expect_member(from, "SKETCH_RESP");
    require(m->client == from, ErrorCode::kProtocol, "sender does not match client field");
    require(m->kind == config_.kind, ErrorCode::kProtocol, "sketch kind mismatch");
    const std::size_t d = m->kind == SketchKind::kDDSketch ? m->sketches.size() : m->exact.size();
    if (!features_known_) {
      n_features_ = d;
      features_known_ = true;
    }
    require(d == n_features_, ErrorCode::kProtocol, "sketch feature count mismatch");
    if (m->kind == SketchKind::kDDSketch) {
      for (const auto& s : m->sketches) {
        require(s.relative_accuracy() == config_.rho, ErrorCode::kProtocol,
                "sketch accuracy does not match the request");
      }
    }
    if (!sketches_.emplace(from, *m).second) {
      fail(ErrorCode::kProtocol, "duplicate SKETCH_RESP from client " + std::to_string(from));
    }
    if (sketches_.size() < cohort_.size()) return {};
    return on_sketches(now);
  }
  if (const auto* m = std::get_if<AtomResp>(&message)) {
    if (phase_ != Phase::kAwaitAtoms || m->round != round_) return wrong();
    expect_member(from, "ATOM_RESP");
    require(m->client == from, ErrorCode::kProtocol, "sender does not match client field");
    require(m->atoms.round == round_, ErrorCode::kProtocol, "atom map round mismatch");
    require(m->atoms.n_features == n_features_, ErrorCode::kProtocol,
            "atom map feature count mismatch");
    require(m->atoms.n_classes == static_cast<uint32_t>(config_.n_classes), ErrorCode::kProtocol,
            "atom map class count mismatch");
    m->atoms.validate();
    if (!atoms_.emplace(from, *m).second) {
      fail(ErrorCode::kProtocol, "duplicate ATOM_RESP from client " + std::to_string(from));
    }
    if (atoms_.size() < cohort_.size()) return {};
    return on_atoms(now);
  }
  if (const auto* m = std::get_if<FinalAck>(&message)) {
    if (phase_ != Phase::kAwaitFinal || m->round != round_) return wrong();
    expect_member(from, "FINAL_ACK");
    require(m->client == from, ErrorCode::kProtocol, "sender does not match client field");
    if (!acks_.emplace(from, *m).second) {
      fail(ErrorCode::kProtocol, "duplicate FINAL_ACK from client " + std::to_string(from));
    }
    if (acks_.size() < clients_.size()) return {};
    double loss = 0.0;
    uint64_t n = 0;
    for (const auto& [c, ack] : acks_) {
      loss += ack.loss_sum;
      n += ack.n_rows;
    }
    if (n > 0) objective_.back() = loss / static_cast<double>(n);
    phase_ = Phase::kDone;
    return {};
  }
  return wrong();
}

std::vector<Outbound> Server::on_sketches(double now) {
  RoundRecord record;
  record.round = round_;
  record.cohort = cohort_;
  const int bins = config_.train.bins;
  // std::map iterates in client-id order, which fixes the merge order.
  if (config_.kind == SketchKind::kDDSketch) {
    record.merged_sketches.assign(n_features_, sketch::DDSketch(config_.rho));
    for (const auto& [c, resp] : sketches_) {
      for (std::size_t f = 0; f < n_features_; ++f) record.merged_sketches[f].merge(resp.sketches[f]);
    }
    record.edges = binning::build_edges<sketch::DDSketch>(record.merged_sketches, bins, round_);
  } else {
    record.merged_exact.resize(n_features_);
    for (const auto& [c, resp] : sketches_) {
      for (std::size_t f = 0; f < n_features_; ++f) record.merged_exact[f].merge(resp.exact[f]);
    }
    record.edges =
        binning::build_edges<sketch::ExactWeightedQuantiler>(record.merged_exact, bins, round_);
  }
  records_.push_back(std::move(record));
  sketches_.clear();

  phase_ = Phase::kAwaitAtoms;
  opened_at_ = now;
  std::vector<Outbound> out;
  for (ClientId c : cohort_) {
    AtomReq req;
    req.round = round_;
    req.deltas = deltas_for(c);  // empty unless a delta was withheld earlier
    req.edges = records_.back().edges;
    out.push_back({c, std::move(req)});
  }
  return out;
}

std::vector<Outbound> Server::on_atoms(double now) {
  std::vector<binning::AtomMap> maps;
  maps.reserve(atoms_.size());
  double loss = 0.0;
  uint64_t n = 0;
  for (auto& [c, resp] : atoms_) {
    loss += resp.loss_sum;
    n += resp.n_rows;
    maps.push_back(std::move(resp.atoms));
  }
  atoms_.clear();
  if (n > 0 && cohort_.size() == clients_.size()) {
    objective_[round_ - 1] = loss / static_cast<double>(n);
  }
  RoundRecord& record = records_.back();
  record.merged_atoms = binning::merge_atom_maps(maps);
  gbt::TreeGroup group =
      grow_from_atoms(record.merged_atoms, record.edges, config_.train, config_.fault);
  ensemble_.rounds.push_back(std::move(group));
  return begin_round(now);
}

namespace {

struct Pending {
  std::vector<uint32_t> atom_ids;
  int depth;
};

}  // namespace

gbt::TreeGroup Server::grow_from_atoms(const binning::AtomMap& atoms,
                                       const binning::EdgeSet& edges,
                                       const gbt::TrainConfig& config, Fault fault) {
  const std::size_t k = atoms.n_classes;
  const std::size_t d = atoms.n_features;
  require(edges.n_features() == d, ErrorCode::kProtocol, "edge set does not match atoms");

  gbt::TreeGroup group;
  group.n_classes = static_cast<int>(k);
  std::vector<Pending> pending(1);
  pending[0].atom_ids.resize(atoms.size());
  std::iota(pending[0].atom_ids.begin(), pending[0].atom_ids.end(), 0u);
  pending[0].depth = 0;
  group.nodes.emplace_back();

  std::vector<double> total_g(k), total_h(k), left_g(k), left_h(k);
  for (std::size_t id = 0; id < group.nodes.size(); ++id) {
    Pending node = std::move(pending[id]);
    std::fill(total_g.begin(), total_g.end(), 0.0);
    std::fill(total_h.begin(), total_h.end(), 0.0);
    for (uint32_t a : node.atom_ids) {
      auto g = atoms.grad_of(a);
      auto h = atoms.hess_of(a);
      for (std::size_t c = 0; c < k; ++c) {
        total_g[c] += g[c];
        total_h[c] += h[c];
      }
    }
    double hess_sum = 0.0;
    for (double v : total_h) hess_sum += v;

    double best_gain = -std::numeric_limits<double>::infinity();
    int best_f = -1;
    int best_q = -1;
    if (node.depth < config.max_depth && hess_sum > 0.0) {
      const binning::Histogram hist = binning::atom_histogram(atoms, node.atom_ids, edges);
      for (std::size_t f = 0; f < d; ++f) {
        std::fill(left_g.begin(), left_g.end(), 0.0);
        std::fill(left_h.begin(), left_h.end(), 0.0);
        for (std::size_t q = 1; q < hist.n_bins(f); ++q) {
          auto bg = hist.grad(f, q - 1);
          auto bh = hist.hess(f, q - 1);
          double gain = 0.0;
          for (std::size_t c = 0; c < k; ++c) {
            left_g[c] += bg[c];
            left_h[c] += bh[c];
            gain += gbt::split_gain(left_g[c], left_h[c], total_g[c] - left_g[c],
                                    total_h[c] - left_h[c], config.lambda, config.gamma);
          }
          const bool better = fault == Fault::kTieBreak ? gain >= best_gain : gain > best_gain;
          if (better) {
            best_gain = gain;
            best_f = static_cast<int>(f);
            best_q = static_cast<int>(q);
          }
        }
      }
    }

    if (best_f < 0 || !(best_gain > 0.0)) {
      gbt::TreeNode& leaf = group.nodes[id];
      leaf.weights.resize(k);
      for (std::size_t c = 0; c < k; ++c) {
        leaf.weights[c] = gbt::leaf_weight(total_g[c], total_h[c], config.lambda);
      }
      continue;
    }

    Pending left{{}, node.depth + 1};
    Pending right{{}, node.depth + 1};
    const auto f = static_cast<std::size_t>(best_f);
    for (uint32_t a : node.atom_ids) {
      (atoms.key(a)[f] < best_q ? left : right).atom_ids.push_back(a);
    }
    const auto left_id = static_cast<int32_t>(group.nodes.size());
    gbt::TreeNode& split = group.nodes[id];
    split.feature = best_f;
    split.bin = best_q;
    split.threshold = edges.threshold(f, static_cast<std::size_t>(best_q));
    split.gain = best_gain;
    split.left = left_id;
    split.right = left_id + 1;
    group.nodes.emplace_back();
    group.nodes.emplace_back();
    pending.resize(group.nodes.size());
    pending[static_cast<std::size_t>(left_id)] = std::move(left);
    pending[static_cast<std::size_t>(left_id) + 1] = std::move(right);
  }
  return group;
}

}  // namespace fedscs::protocol
