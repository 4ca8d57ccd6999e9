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

#include "protocol/client.hpp"

#include <sstream>

#include "gbt/objective.hpp"

namespace fedscs::protocol {

Client::Client(ClientId id, gbt::Dataset data)
    : id_(id),
      data_(std::move(data)),
      margins_(data_.n_rows(), static_cast<std::size_t>(data_.n_classes), 0.0) {
  data_.validate();
}

bool Client::stale(uint32_t round, const char* what) {
  if (round < last_seen_) {
    std::ostringstream os;
    os << "client " << id_ << ": ignoring stale " << what << " for round " << round
       << " (latest " << last_seen_ << ")";
    warnings_.push_back(os.str());
    return true;
  }
  last_seen_ = round;
  return false;
}

void Client::apply(const RoundDelta& delta) {
  if (delta.round <= last_applied_) return;
  if (delta.round != last_applied_ + 1) {
    fail(ErrorCode::kProtocol, "client " + std::to_string(id_) + ": missing trees for round " +
                                   std::to_string(last_applied_ + 1));
  }
  if (delta.trees.n_classes != data_.n_classes) {
    fail(ErrorCode::kProtocol, "tree group class count does not match local data");
  }
  for (const auto& node : delta.trees.nodes) {
    if (!node.is_leaf() && static_cast<std::size_t>(node.feature) >= data_.n_features()) {
      fail(ErrorCode::kProtocol, "tree references an unknown feature");
    }
  }
  gbt::accumulate_round(delta.trees, delta.eta, data_.features, margins_);
  last_applied_ = delta.round;
}

void Client::apply_all(const std::vector<RoundDelta>& deltas) {
  for (const RoundDelta& d : deltas) apply(d);
}

SketchResp Client::answer(const SketchReq& req) {
  apply_all(req.deltas);
  gbt::GradHess gh = gbt::softmax_grad_hess(margins_, data_.labels);
  gbt::quantize(gh);
  const std::vector<double> weights = gbt::hessian_weights(gh);

  SketchResp resp;
  resp.round = req.round;
  resp.client = id_;
  resp.kind = req.kind;
  const std::size_t n = data_.n_rows();
  const std::size_t d = data_.n_features();
  if (req.kind == SketchKind::kDDSketch) {
    resp.sketches.assign(d, sketch::DDSketch(req.rho));
    for (std::size_t i = 0; i < n; ++i) {
      auto x = data_.row(i);
      for (std::size_t f = 0; f < d; ++f) resp.sketches[f].insert(x[f], weights[i]);
    }
  } else {
    std::vector<double> column(n);
    resp.exact.reserve(d);
    for (std::size_t f = 0; f < d; ++f) {
      for (std::size_t i = 0; i < n; ++i) column[i] = data_.features(i, f);
      resp.exact.emplace_back(column, weights);
    }
  }
  return resp;
}

AtomResp Client::answer(const AtomReq& req) {
  apply_all(req.deltas);
  if (req.edges.n_features() != data_.n_features()) {
    fail(ErrorCode::kProtocol, "edge set feature count does not match local data");
  }
  if (req.edges.round != req.round) fail(ErrorCode::kProtocol, "edge set round mismatch");
  gbt::GradHess gh = gbt::softmax_grad_hess(margins_, data_.labels);
  gbt::quantize(gh);

  AtomResp resp;
  resp.round = req.round;
  resp.client = id_;
  resp.loss_sum = gbt::log_loss_sum(margins_, data_.labels);
  resp.n_rows = data_.n_rows();
  resp.atoms = binning::aggregate_atoms(data_.features, gh, req.edges);
  return resp;
}

FinalAck Client::answer(const ModelFinal& req) {
  const gbt::Ensemble& model = req.ensemble;
  if (model.n_classes != data_.n_classes) {
    fail(ErrorCode::kProtocol, "final model class count does not match local data");
  }
  for (std::size_t r = last_applied_; r < model.rounds.size(); ++r) {
    apply(RoundDelta{static_cast<uint32_t>(r + 1), model.eta, model.rounds[r]});
  }
  FinalAck ack;
  ack.round = req.round;
  ack.client = id_;
  ack.loss_sum = gbt::log_loss_sum(margins_, data_.labels);
  ack.n_rows = data_.n_rows();
  return ack;
}

std::optional<Message> Client::handle(const Message& message) {
  if (const auto* m = std::get_if<SketchReq>(&message)) {
    if (stale(m->round, "SKETCH_REQ")) return std::nullopt;
    return answer(*m);
  }
  if (const auto* m = std::get_if<AtomReq>(&message)) {
    if (stale(m->round, "ATOM_REQ")) return std::nullopt;
    return answer(*m);
  }
  if (const auto* m = std::get_if<ModelFinal>(&message)) {
    if (stale(m->round, "MODEL_FINAL")) return std::nullopt;
    return answer(*m);
  }
  fail(ErrorCode::kProtocol, std::string("client cannot handle ") +
                                 message_type_name(message_type(message)));
}

}  // namespace fedscs::protocol
