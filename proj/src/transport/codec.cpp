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

#include "transport/codec.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

namespace fedscs::transport {

using namespace protocol;

namespace {

class Writer {
 public:
  void u8(uint8_t v) { out_.push_back(v); }
  void u16(uint16_t v) { le(v, 2); }
  void u32(uint32_t v) { le(v, 4); }
  void u64(uint64_t v) { le(v, 8); }
  void i64(int64_t v) { le(static_cast<uint64_t>(v), 8); }
  void f64(double v) { le(std::bit_cast<uint64_t>(v), 8); }
  std::vector<uint8_t>& bytes() { return out_; }

 private:
  void le(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> in) : in_(in) {}

  uint8_t u8() { return static_cast<uint8_t>(le(1)); }
  uint16_t u16() { return static_cast<uint16_t>(le(2)); }
  uint32_t u32() { return static_cast<uint32_t>(le(4)); }
  uint64_t u64() { return le(8); }
  int64_t i64() { return static_cast<int64_t>(le(8)); }
  double f64() { return std::bit_cast<double>(le(8)); }

  // Rejects counts that cannot fit in the remaining bytes before anything is
  // allocated for them.
  std::size_t count(uint64_t n, std::size_t min_item_bytes) {
    if (min_item_bytes > 0 && n > remaining() / min_item_bytes) {
      fail(ErrorCode::kFrame, "element count exceeds payload size");
    }
    return static_cast<std::size_t>(n);
  }
  std::size_t remaining() const { return in_.size() - pos_; }
  void finish() const {
    if (pos_ != in_.size()) fail(ErrorCode::kFrame, "trailing bytes after payload");
  }

 private:
  uint64_t le(int n) {
    if (remaining() < static_cast<std::size_t>(n)) fail(ErrorCode::kFrame, "truncated payload");
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::span<const uint8_t> in_;
  std::size_t pos_ = 0;
};

void frame_check(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::kFrame, what);
}

// ---- tree groups and ensembles

void put_group(Writer& w, const gbt::TreeGroup& g) {
  w.u32(static_cast<uint32_t>(g.n_classes));
  w.u32(static_cast<uint32_t>(g.nodes.size()));
  for (const auto& n : g.nodes) {
    w.u8(n.is_leaf() ? 1 : 0);
    if (n.is_leaf()) {
      require(n.weights.size() == static_cast<std::size_t>(g.n_classes), ErrorCode::kInvalidInput,
              "leaf weight count does not match class count");
      for (double v : n.weights) w.f64(v);
    } else {
      w.u32(static_cast<uint32_t>(n.feature));
      w.u32(static_cast<uint32_t>(n.bin));
      w.f64(n.threshold);
      w.f64(n.gain);
      w.u32(static_cast<uint32_t>(n.left));
      w.u32(static_cast<uint32_t>(n.right));
    }
  }
}

gbt::TreeGroup get_group(Reader& r) {
  gbt::TreeGroup g;
  const uint32_t k = r.u32();
  frame_check(k >= 1 && k <= (1u << 20), "bad class count in tree group");
  g.n_classes = static_cast<int>(k);
  const std::size_t n = r.count(r.u32(), 1 + 8);
  g.nodes.resize(n);
  constexpr auto kMaxIndex = static_cast<uint32_t>(std::numeric_limits<int32_t>::max());
  for (std::size_t i = 0; i < n; ++i) {
    gbt::TreeNode& node = g.nodes[i];
    const uint8_t leaf = r.u8();
    frame_check(leaf <= 1, "bad node tag");
    if (leaf) {
      r.count(k, 8);
      node.weights.resize(k);
      for (double& v : node.weights) {
        v = r.f64();
        frame_check(std::isfinite(v), "non-finite leaf weight");
      }
    } else {
      const uint32_t feature = r.u32();
      const uint32_t bin = r.u32();
      node.threshold = r.f64();
      node.gain = r.f64();
      const uint32_t left = r.u32();
      const uint32_t right = r.u32();
      frame_check(feature < kMaxIndex && bin < kMaxIndex, "bad split index");
      frame_check(std::isfinite(node.threshold) && std::isfinite(node.gain),
                  "non-finite split field");
      frame_check(left > i && right > i && left < n && right < n && left != right,
                  "bad child index");
      node.feature = static_cast<int32_t>(feature);
      node.bin = static_cast<int32_t>(bin);
      node.left = static_cast<int32_t>(left);
      node.right = static_cast<int32_t>(right);
    }
  }
  return g;
}

void put_ensemble(Writer& w, const gbt::Ensemble& e) {
  w.u32(static_cast<uint32_t>(e.n_classes));
  w.f64(e.eta);
  w.f64(e.base_margin);
  w.u32(static_cast<uint32_t>(e.rounds.size()));
  for (const auto& g : e.rounds) put_group(w, g);
}

gbt::Ensemble get_ensemble(Reader& r) {
  gbt::Ensemble e;
  const uint32_t k = r.u32();
  frame_check(k >= 1 && k <= (1u << 20), "bad class count in ensemble");
  e.n_classes = static_cast<int>(k);
  e.eta = r.f64();
  e.base_margin = r.f64();
  frame_check(std::isfinite(e.eta) && std::isfinite(e.base_margin), "non-finite ensemble field");
  const std::size_t rounds = r.count(r.u32(), 8);
  e.rounds.reserve(rounds);
  for (std::size_t t = 0; t < rounds; ++t) {
    e.rounds.push_back(get_group(r));
    frame_check(e.rounds.back().n_classes == e.n_classes, "tree group class count mismatch");
  }
  return e;
}

void put_deltas(Writer& w, const std::vector<RoundDelta>& deltas) {
  w.u32(static_cast<uint32_t>(deltas.size()));
  for (const auto& d : deltas) {
    w.u32(d.round);
    w.f64(d.eta);
    put_group(w, d.trees);
  }
}

std::vector<RoundDelta> get_deltas(Reader& r) {
  std::vector<RoundDelta> out(r.count(r.u32(), 4 + 8 + 8));
  for (auto& d : out) {
    d.round = r.u32();
    d.eta = r.f64();
    frame_check(std::isfinite(d.eta), "non-finite delta eta");
    d.trees = get_group(r);
  }
  return out;
}

// ---- summaries

void put_buckets(Writer& w, const std::map<int64_t, double>& m) {
  w.u32(static_cast<uint32_t>(m.size()));
  for (const auto& [index, weight] : m) {
    w.i64(index);
    w.f64(weight);
  }
}

std::map<int64_t, double> get_buckets(Reader& r) {
  std::map<int64_t, double> m;
  const std::size_t n = r.count(r.u32(), 16);
  int64_t prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int64_t index = r.i64();
    const double weight = r.f64();
    frame_check(i == 0 || index > prev, "bucket indices not increasing");
    frame_check(std::isfinite(weight) && weight > 0.0, "bad bucket weight");
    m.emplace_hint(m.end(), index, weight);
    prev = index;
  }
  return m;
}

constexpr uint8_t kSketchVersion = 1;

void put_ddsketch(Writer& w, const sketch::DDSketch& s) {
  w.u8(kSketchVersion);
  w.f64(s.relative_accuracy());
  put_buckets(w, s.positive_buckets());
  put_buckets(w, s.negative_buckets());
  w.f64(s.zero_weight());
}

sketch::DDSketch get_ddsketch(Reader& r) {
  frame_check(r.u8() == kSketchVersion, "unsupported sketch version");
  const double rho = r.f64();
  auto positive = get_buckets(r);
  auto negative = get_buckets(r);
  const double zero = r.f64();
  return sketch::DDSketch::from_buckets(rho, std::move(positive), std::move(negative), zero);
}

void put_exact(Writer& w, const sketch::ExactWeightedQuantiler& q) {
  w.u64(q.entries().size());
  for (const auto& e : q.entries()) {
    w.f64(e.value);
    w.f64(e.weight);
  }
}

sketch::ExactWeightedQuantiler get_exact(Reader& r) {
  std::vector<sketch::ExactWeightedQuantiler::Entry> entries(r.count(r.u64(), 16));
  for (auto& e : entries) {
    e.value = r.f64();
    e.weight = r.f64();
  }
  return sketch::ExactWeightedQuantiler::from_sorted(std::move(entries));
}

// ---- edges and atoms

void put_edges(Writer& w, const binning::EdgeSet& e) {
  w.u32(e.round);
  w.u32(static_cast<uint32_t>(e.edges.size()));
  for (const auto& f : e.edges) {
    w.u32(static_cast<uint32_t>(f.size()));
    for (double v : f) w.f64(v);
  }
}

binning::EdgeSet get_edges(Reader& r) {
  binning::EdgeSet e;
  e.round = r.u32();
  e.edges.resize(r.count(r.u32(), 4));
  for (auto& f : e.edges) {
    f.resize(r.count(r.u32(), 8));
    for (double& v : f) v = r.f64();
  }
  e.validate();
  return e;
}

void put_atoms(Writer& w, const binning::AtomMap& a) {
  w.u32(a.round);
  w.u32(a.n_features);
  w.u32(a.n_classes);
  bool narrow = true;
  for (uint16_t k : a.keys) narrow = narrow && k < 256;
  w.u8(narrow ? 1 : 2);
  w.u64(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (uint16_t k : a.key(i)) narrow ? w.u8(static_cast<uint8_t>(k)) : w.u16(k);
    w.u64(a.counts[i]);
    for (double v : a.grad_of(i)) w.f64(v);
    for (double v : a.hess_of(i)) w.f64(v);
  }
}

binning::AtomMap get_atoms(Reader& r) {
  binning::AtomMap a;
  a.round = r.u32();
  a.n_features = r.u32();
  a.n_classes = r.u32();
  const uint8_t width = r.u8();
  frame_check(width == 1 || width == 2, "bad atom key width");
  frame_check(a.n_classes >= 1 && a.n_classes <= (1u << 20), "bad atom class count");
  frame_check(a.n_features <= (1u << 20), "bad atom feature count");
  const std::size_t per_atom = width * std::size_t{a.n_features} + 8 + 16 * std::size_t{a.n_classes};
  const std::size_t n = r.count(r.u64(), per_atom);
  a.keys.resize(n * a.n_features);
  a.counts.resize(n);
  a.grad.resize(n * a.n_classes);
  a.hess.resize(n * a.n_classes);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < a.n_features; ++f) {
      a.keys[i * a.n_features + f] = width == 1 ? r.u8() : r.u16();
    }
    a.counts[i] = r.u64();
    for (std::size_t c = 0; c < a.n_classes; ++c) a.grad[i * a.n_classes + c] = r.f64();
    for (std::size_t c = 0; c < a.n_classes; ++c) a.hess[i * a.n_classes + c] = r.f64();
  }
  a.validate();
  return a;
}

SketchKind get_kind(Reader& r) {
  const uint8_t k = r.u8();
  frame_check(k <= 1, "unknown sketch kind");
  return static_cast<SketchKind>(k);
}

// ---- messages

void put(Writer& w, const SketchReq& m) {
  w.u32(m.round);
  w.u32(m.bins);
  w.f64(m.rho);
  w.u8(static_cast<uint8_t>(m.kind));
  put_deltas(w, m.deltas);
}

void put(Writer& w, const SketchResp& m) {
  w.u32(m.round);
  w.u32(m.client);
  w.u8(static_cast<uint8_t>(m.kind));
  if (m.kind == SketchKind::kDDSketch) {
    require(m.exact.empty(), ErrorCode::kInvalidInput, "exact summaries in a sketch response");
    w.u32(static_cast<uint32_t>(m.sketches.size()));
    for (const auto& s : m.sketches) put_ddsketch(w, s);
  } else {
    require(m.sketches.empty(), ErrorCode::kInvalidInput, "sketches in an exact response");
    w.u32(static_cast<uint32_t>(m.exact.size()));
    for (const auto& q : m.exact) put_exact(w, q);
  }
}

void put(Writer& w, const AtomReq& m) {
  w.u32(m.round);
  put_deltas(w, m.deltas);
  put_edges(w, m.edges);
}

void put(Writer& w, const AtomResp& m) {
  w.u32(m.round);
  w.u32(m.client);
  w.f64(m.loss_sum);
  w.u64(m.n_rows);
  put_atoms(w, m.atoms);
}

void put(Writer& w, const ModelFinal& m) {
  w.u32(m.round);
  put_ensemble(w, m.ensemble);
}

void put(Writer& w, const FinalAck& m) {
  w.u32(m.round);
  w.u32(m.client);
  w.f64(m.loss_sum);
  w.u64(m.n_rows);
}

Message get_payload(MessageType type, Reader& r) {
  switch (type) {
    case MessageType::kSketchReq: {
      SketchReq m;
      m.round = r.u32();
      m.bins = r.u32();
      m.rho = r.f64();
      frame_check(std::isfinite(m.rho) && m.rho >= 0.0 && m.rho < 1.0, "bad sketch rho");
      m.kind = get_kind(r);
      m.deltas = get_deltas(r);
      return m;
    }
    case MessageType::kSketchResp: {
      SketchResp m;
      m.round = r.u32();
      m.client = r.u32();
      m.kind = get_kind(r);
      const std::size_t d = r.count(r.u32(), 8);
      for (std::size_t f = 0; f < d; ++f) {
        if (m.kind == SketchKind::kDDSketch) {
          m.sketches.push_back(get_ddsketch(r));
        } else {
          m.exact.push_back(get_exact(r));
        }
      }
      return m;
    }
    case MessageType::kAtomReq: {
      AtomReq m;
      m.round = r.u32();
      m.deltas = get_deltas(r);
      m.edges = get_edges(r);
      return m;
    }
    case MessageType::kAtomResp: {
      AtomResp m;
      m.round = r.u32();
      m.client = r.u32();
      m.loss_sum = r.f64();
      m.n_rows = r.u64();
      frame_check(std::isfinite(m.loss_sum), "non-finite loss sum");
      m.atoms = get_atoms(r);
      return m;
    }
    case MessageType::kModelFinal: {
      ModelFinal m;
      m.round = r.u32();
      m.ensemble = get_ensemble(r);
      return m;
    }
    case MessageType::kFinalAck: {
      FinalAck m;
      m.round = r.u32();
      m.client = r.u32();
      m.loss_sum = r.f64();
      m.n_rows = r.u64();
      frame_check(std::isfinite(m.loss_sum), "non-finite loss sum");
      return m;
    }
  }
  fail(ErrorCode::kFrame, "unknown message type");
}

struct Header {
  MessageType type;
  uint32_t length;
};

Header parse_header(std::span<const uint8_t> b) {
  frame_check(b.size() >= kFrameHeaderSize, "truncated frame header");
  frame_check(b[0] == kFrameMagic0 && b[1] == kFrameMagic1, "bad frame magic");
  frame_check(b[2] == kWireVersion, "unsupported wire version");
  frame_check(b[3] >= 1 && b[3] <= 6, "unknown message type");
  const uint32_t length = static_cast<uint32_t>(b[4]) | (static_cast<uint32_t>(b[5]) << 8) |
                          (static_cast<uint32_t>(b[6]) << 16) |
                          (static_cast<uint32_t>(b[7]) << 24);
  frame_check(length <= kMaxPayload, "payload exceeds size limit");
  return {static_cast<MessageType>(b[3]), length};
}

}  // namespace

std::vector<uint8_t> encode(const Message& message) {
  Writer w;
  for (std::size_t i = 0; i < kFrameHeaderSize; ++i) w.u8(0);
  std::visit([&](const auto& m) { put(w, m); }, message);
  auto& out = w.bytes();
  const std::size_t length = out.size() - kFrameHeaderSize;
  require(length <= kMaxPayload, ErrorCode::kFrame, "payload exceeds size limit");
  out[0] = kFrameMagic0;
  out[1] = kFrameMagic1;
  out[2] = kWireVersion;
  out[3] = static_cast<uint8_t>(message_type(message));
  for (int i = 0; i < 4; ++i) out[4 + i] = static_cast<uint8_t>(length >> (8 * i));
  return std::move(out);
}

Message decode(std::span<const uint8_t> frame) {
  const Header h = parse_header(frame);
  frame_check(frame.size() - kFrameHeaderSize >= h.length, "truncated payload");
  frame_check(frame.size() - kFrameHeaderSize == h.length, "trailing bytes after frame");
  Reader r(frame.subspan(kFrameHeaderSize));
  try {
    Message m = get_payload(h.type, r);
    r.finish();
    return m;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kFrame) throw;
    fail(ErrorCode::kFrame, std::string("invalid payload: ") + e.what());
  }
}

void FrameStreamDecoder::feed(std::span<const uint8_t> bytes) {
  if (offset_ > 0 && offset_ == buffer_.size()) {
    buffer_.clear();
    offset_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<Message> FrameStreamDecoder::next() {
  const std::span<const uint8_t> pending(buffer_.data() + offset_, buffer_.size() - offset_);
  if (pending.size() < kFrameHeaderSize) return std::nullopt;
  const Header h = parse_header(pending);
  const std::size_t total = kFrameHeaderSize + h.length;
  if (pending.size() < total) return std::nullopt;
  Message m = decode(pending.first(total));
  offset_ += total;
  if (offset_ > (1u << 20) && offset_ * 2 > buffer_.size()) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(offset_));
    offset_ = 0;
  }
  return m;
}

}  // namespace fedscs::transport
