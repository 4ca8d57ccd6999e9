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

#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "frame_mutator.hpp"
#include "generators.hpp"
#include "transport/codec.hpp"

namespace fedscs::transport {
namespace {

using protocol::Message;
using testing::Rng;

TEST(Codec, SketchReqRoundtrip) {
  protocol::SketchReq req;
  req.round = 1;
  req.bins = 64;
  req.rho = 0.001;
  const Message m = req;
  EXPECT_EQ(decode(encode(m)), m);
}

TEST(Codec, FinalAckByteLayout) {
  protocol::FinalAck ack;
  ack.round = 0x01020304;
  ack.client = 7;
  ack.loss_sum = 1.0;
  ack.n_rows = 0x1122;
  const auto bytes = encode(Message{ack});
  const std::vector<uint8_t> expected = {
      'F', 'X', 1, 6, 24, 0, 0, 0,                // header
      0x04, 0x03, 0x02, 0x01,                     // round
      7, 0, 0, 0,                                 // client
      0, 0, 0, 0, 0, 0, 0xF0, 0x3F,               // 1.0
      0x22, 0x11, 0, 0, 0, 0, 0, 0,               // rows
  };
  EXPECT_EQ(bytes, expected);
}

TEST(Codec, RandomMessagesRoundtrip) {
  Rng rng(1);
  for (int i = 0; i < 3000; ++i) {
    const Message m = testing::random_message(rng);
    const auto bytes = encode(m);
    ASSERT_EQ(decode(bytes), m) << "message " << i;
  }
}

TEST(Codec, LargeAtomRespRoundtripIsBitExact) {
  Rng rng(2);
  for (bool wide : {false, true}) {
    protocol::AtomResp resp;
    resp.round = 3;
    resp.client = 1;
    resp.loss_sum = 123.25;
    resp.n_rows = 99;
    resp.atoms = testing::random_atoms(rng, 10000, 6, 5, wide);
    const auto bytes = encode(Message{resp});
    const auto back = std::get<protocol::AtomResp>(decode(bytes));
    ASSERT_EQ(back.atoms.size(), resp.atoms.size());
    EXPECT_EQ(std::memcmp(back.atoms.grad.data(), resp.atoms.grad.data(),
                          resp.atoms.grad.size() * sizeof(double)),
              0);
    EXPECT_EQ(back, resp);
  }
}

TEST(Codec, EveryTruncationIsAFrameError) {
  Rng rng(3);
  for (int i = 0; i < 60; ++i) {
    const auto bytes = encode(testing::random_message(rng));
    for (std::size_t n = 0; n < bytes.size(); ++n) {
      EXPECT_FEDSCS_ERROR(decode(std::span(bytes.data(), n)), ErrorCode::kFrame);
    }
  }
}

TEST(Codec, HeaderChecks) {
  const auto good = encode(Message{protocol::FinalAck{}});
  auto bad = good;
  bad[0] = 'G';
  EXPECT_FEDSCS_ERROR(decode(bad), ErrorCode::kFrame);
  bad = good;
  bad[2] = 2;
  EXPECT_FEDSCS_ERROR(decode(bad), ErrorCode::kFrame);
  bad = good;
  bad[3] = 0;
  EXPECT_FEDSCS_ERROR(decode(bad), ErrorCode::kFrame);
  bad = good;
  bad[3] = 7;
  EXPECT_FEDSCS_ERROR(decode(bad), ErrorCode::kFrame);
  bad = good;
  bad.push_back(0);
  EXPECT_FEDSCS_ERROR(decode(bad), ErrorCode::kFrame);
  bad = good;
  bad[7] = 0x7F;  // length far above the cap
  EXPECT_FEDSCS_ERROR(decode(bad), ErrorCode::kFrame);
}

TEST(Codec, HugeCountsAreRejectedBeforeAllocation) {
  protocol::AtomResp resp;
  resp.atoms.n_features = 1;
  resp.atoms.n_classes = 1;
  auto bytes = encode(Message{resp});
  // Atom count sits in the last 8 bytes of an empty map.
  for (std::size_t i = bytes.size() - 8; i < bytes.size(); ++i) bytes[i] = 0xFF;
  EXPECT_FEDSCS_ERROR(decode(bytes), ErrorCode::kFrame);
}

TEST(Codec, InvalidPayloadValuesAreFrameErrors) {
  protocol::SketchResp resp;
  sketch::DDSketch s(0.01);
  s.insert(2.0, 1.0);
  resp.sketches.push_back(s);
  auto bytes = encode(Message{resp});
  // rho lives right after: round, client, kind, count, sketch version.
  const std::size_t rho_at = kFrameHeaderSize + 4 + 4 + 1 + 4 + 1;
  const double bad_rho = 2.0;
  std::memcpy(bytes.data() + rho_at, &bad_rho, 8);
  EXPECT_FEDSCS_ERROR(decode(bytes), ErrorCode::kFrame);
}

TEST(Codec, FuzzedFramesDecodeOrFailCleanly) {
  Rng rng(4);
  int decoded = 0;
  for (int seed = 0; seed < 200; ++seed) {
    const auto frame = encode(testing::random_message(rng));
    for (int i = 0; i < 100; ++i) {
      const auto bytes = testing::mutate_frame(rng, frame);
      try {
        const Message m = decode(bytes);
        ++decoded;
        const auto again = encode(m);
        EXPECT_EQ(encode(decode(again)), again);
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::kFrame) << e.what();
      }
    }
  }
  EXPECT_GT(decoded, 0);
}

TEST(FrameStreamDecoder, ReassemblesArbitraryChunks) {
  Rng rng(5);
  std::vector<Message> sent;
  std::vector<uint8_t> stream;
  for (int i = 0; i < 200; ++i) {
    sent.push_back(testing::random_message(rng));
    const auto b = encode(sent.back());
    stream.insert(stream.end(), b.begin(), b.end());
  }
  for (std::size_t chunk : {1u, 3u, 8u, 1000u, 1u << 20}) {
    FrameStreamDecoder dec;
    std::vector<Message> got;
    for (std::size_t at = 0; at < stream.size(); at += chunk) {
      dec.feed(std::span(stream).subspan(at, std::min(chunk, stream.size() - at)));
      while (auto m = dec.next()) got.push_back(std::move(*m));
    }
    EXPECT_EQ(got, sent) << "chunk " << chunk;
    EXPECT_EQ(dec.buffered(), 0u);
  }
}

TEST(FrameStreamDecoder, WaitsForCompleteFrameAndRejectsGarbage) {
  const auto b = encode(Message{protocol::FinalAck{}});
  FrameStreamDecoder dec;
  dec.feed(std::span(b).first(b.size() - 1));
  EXPECT_FALSE(dec.next());
  dec.feed(std::span(b).last(1));
  EXPECT_TRUE(dec.next());
  FrameStreamDecoder junk;
  const uint8_t garbage[8] = {'N', 'O', 1, 1, 0, 0, 0, 0};
  junk.feed(garbage);
  EXPECT_FEDSCS_ERROR(junk.next(), ErrorCode::kFrame);
}

}  // namespace
}  // namespace fedscs::transport
