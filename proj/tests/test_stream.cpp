/*
 * Copyright (c) 2026 the evc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <algorithm>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "evc/bframe.hpp"
#include "evc/keyframe_codec.hpp"
#include "evc/motion_estimation.hpp"
#include "evc/stream.hpp"
#include "testutil.hpp"

using namespace evc;

namespace {

EncodedFrameUnit key_unit(uint32_t poc, FrameType type, int qp = 28) {
  EncodedFrameUnit u;
  u.frame_type = type;
  u.poc = poc;
  u.qp = qp;
  u.payload = {0xde, 0xad};
  return u;
}

EncodedFrameUnit b_unit(uint32_t poc, uint32_t fwd, uint32_t bwd) {
  EncodedFrameUnit u;
  u.frame_type = FrameType::B;
  u.poc = poc;
  u.fwd_ref_poc = fwd;
  u.bwd_ref_poc = bwd;
  u.payload = {0x42};
  return u;
}

StreamHeader small_header(uint16_t w = 32, uint16_t h = 32) {
  StreamHeader h_;
  h_.width = w;
  h_.height = h;
  h_.interp_factor = 3;
  h_.gop_length = 4;
  h_.base_qp = 28;
  h_.timebase_num = 1;
  h_.timebase_den = 25;
  return h_;
}

// The canonical 9-slot example: display I B B B P B B B P.
struct NineSlot {
  GopStructure schedule;
  std::vector<EncodedFrameUnit> keys;
  std::vector<EncodedFrameUnit> bs;
};

NineSlot nine_slot() {
  NineSlot n;
  n.schedule = build_gop_schedule(3, 3, 40000, 4);
  n.keys = {key_unit(0, FrameType::I), key_unit(4, FrameType::P),
            key_unit(8, FrameType::P)};
  n.bs = {b_unit(1, 0, 4), b_unit(2, 0, 4), b_unit(3, 0, 4),
          b_unit(5, 4, 8), b_unit(6, 4, 8), b_unit(7, 4, 8)};
  return n;
}

}  // namespace

TEST_CASE("the 9-slot schedule serializes in bracketing decode order") {
  const NineSlot n = nine_slot();
  const Bitstream bs =
      synthesize_stream(small_header(), n.keys, n.bs, n.schedule);
  REQUIRE(bs.units.size() == 9);
  CHECK(bs.header.frame_count == 9);
  const uint32_t want[] = {0, 4, 1, 2, 3, 8, 5, 6, 7};
  for (size_t i = 0; i < 9; ++i) CHECK(bs.units[i].poc == want[i]);
  CHECK(bs.units[0].frame_type == FrameType::I);
  CHECK(bs.units[1].frame_type == FrameType::P);
  CHECK(bs.units[2].frame_type == FrameType::B);
}

TEST_CASE("decode order puts every reference before its dependents") {
  evtest::Rng rng(0x0b5);
  for (int iter = 0; iter < 10; ++iter) {
    const uint32_t n_keys = 2 + rng.below(8);
    const uint32_t interp = rng.below(4);
    const uint32_t gop = 1 + rng.below(5);
    const GopStructure schedule = build_gop_schedule(n_keys, interp, 1000, gop);

    std::vector<EncodedFrameUnit> keys, bs_units;
    for (const FrameSlot& slot : schedule.slots) {
      if (slot.type == FrameType::B) {
        const uint32_t fwd = slot.poc / (interp + 1) * (interp + 1);
        bs_units.push_back(b_unit(slot.poc, fwd, fwd + interp + 1));
      } else {
        keys.push_back(key_unit(slot.poc, slot.type));
      }
    }
    const Bitstream bs =
        synthesize_stream(small_header(), keys, bs_units, schedule);

    // Bijection onto the schedule's pocs.
    REQUIRE(bs.units.size() == schedule.slots.size());
    std::set<uint32_t> seen;
    for (const auto& u : bs.units) CHECK(seen.insert(u.poc).second);
    CHECK(*seen.rbegin() == schedule.slots.size() - 1);

    // Every B's references precede it in stored order.
    for (size_t i = 0; i < bs.units.size(); ++i) {
      if (bs.units[i].frame_type != FrameType::B) continue;
      bool fwd_seen = false, bwd_seen = false;
      for (size_t j = 0; j < i; ++j) {
        fwd_seen |= bs.units[j].poc == bs.units[i].fwd_ref_poc;
        bwd_seen |= bs.units[j].poc == bs.units[i].bwd_ref_poc;
      }
      CHECK(fwd_seen);
      CHECK(bwd_seen);
    }
  }
}

TEST_CASE("synthesis detects missing or mislabeled units") {
  const NineSlot n = nine_slot();

  auto keys_missing = n.keys;
  keys_missing.erase(keys_missing.begin() + 1);
  CHECK_THROWS_WITH_AS(
      synthesize_stream(small_header(), keys_missing, n.bs, n.schedule),
      "incomplete GOP", std::runtime_error);

  auto bs_missing = n.bs;
  bs_missing.erase(bs_missing.begin());
  CHECK_THROWS_WITH_AS(
      synthesize_stream(small_header(), n.keys, bs_missing, n.schedule),
      "incomplete GOP", std::runtime_error);

  auto wrong_type = n.keys;
  wrong_type[1].frame_type = FrameType::I;  // schedule slot says P
  CHECK_THROWS_WITH_AS(
      synthesize_stream(small_header(), wrong_type, n.bs, n.schedule),
      "incomplete GOP", std::runtime_error);

  auto extra = n.bs;
  extra.push_back(b_unit(99, 0, 4));
  CHECK_THROWS_WITH_AS(
      synthesize_stream(small_header(), n.keys, extra, n.schedule),
      "incomplete GOP", std::runtime_error);
}

TEST_CASE("synthesis refuses references to units outside the stream") {
  NineSlot n = nine_slot();
  n.bs[3] = b_unit(5, 3, 8);  // poc 3 is a B, not a keyframe
  CHECK_THROWS_WITH_AS(
      synthesize_stream(small_header(), n.keys, n.bs, n.schedule),
      "dangling reference", std::runtime_error);

  NineSlot m = nine_slot();
  m.bs[5] = b_unit(7, 4, 12);  // poc 12 does not exist
  CHECK_THROWS_WITH_AS(
      synthesize_stream(small_header(), m.keys, m.bs, m.schedule),
      "dangling reference", std::runtime_error);
}

TEST_CASE("bitstream bytes round-trip through write and parse") {
  const NineSlot n = nine_slot();
  const Bitstream bs =
      synthesize_stream(small_header(100, 76), n.keys, n.bs, n.schedule);
  const std::vector<uint8_t> bytes = write_bitstream(bs);

  // Fixed header 25 bytes; I/P unit headers 10, B unit headers 17.
  CHECK(container_header_bytes(bs) == 25 + 3 * 10 + 6 * 17);
  CHECK(payload_bytes(bs) == 3 * 2 + 6 * 1);
  CHECK(bytes.size() == container_header_bytes(bs) + payload_bytes(bs));

  const Bitstream back = parse_bitstream(bytes);
  CHECK(back == bs);
  CHECK(back.header.width == 100);
  CHECK(back.header.height == 76);
  CHECK(back.header.timebase_num == 1);
  CHECK(back.header.timebase_den == 25);
}

TEST_CASE("the parser rejects foreign and damaged files") {
  const NineSlot n = nine_slot();
  const Bitstream bs =
      synthesize_stream(small_header(), n.keys, n.bs, n.schedule);
  const std::vector<uint8_t> bytes = write_bitstream(bs);

  CHECK_THROWS_WITH_AS(parse_bitstream({}), "not an EVC stream",
                       std::runtime_error);
  std::vector<uint8_t> bad_magic = bytes;
  bad_magic[3] = '2';
  CHECK_THROWS_WITH_AS(parse_bitstream(bad_magic), "not an EVC stream",
                       std::runtime_error);

  // Truncations anywhere after the magic read as structural corruption.
  for (size_t cut : {size_t(10), size_t(24), size_t(30), bytes.size() - 1}) {
    std::vector<uint8_t> truncated(bytes.begin(), bytes.begin() + cut);
    CHECK_THROWS_WITH_AS(parse_bitstream(truncated), "corrupt header",
                         std::runtime_error);
  }

  std::vector<uint8_t> trailing = bytes;
  trailing.push_back(0x00);
  CHECK_THROWS_WITH_AS(parse_bitstream(trailing), "corrupt header",
                       std::runtime_error);

  std::vector<uint8_t> bad_block = bytes;
  bad_block[8] = 8;  // block_size
  CHECK_THROWS_WITH_AS(parse_bitstream(bad_block), "corrupt header",
                       std::runtime_error);

  std::vector<uint8_t> bad_type = bytes;
  bad_type[25] = 7;  // first unit's frame_type
  CHECK_THROWS_WITH_AS(parse_bitstream(bad_type), "corrupt header",
                       std::runtime_error);
}

TEST_CASE("the parser enforces the B bracketing invariant") {
  StreamHeader h = small_header();
  Bitstream bs;
  bs.header = h;
  bs.header.frame_count = 2;
  bs.units.push_back(key_unit(0, FrameType::I));
  bs.units.push_back(b_unit(1, 1, 2));  // fwd == poc
  const std::vector<uint8_t> bytes = write_bitstream(bs);
  CHECK_THROWS_WITH_AS(parse_bitstream(bytes), "corrupt header",
                       std::runtime_error);

  bs.units[1] = b_unit(3, 1, 2);  // poc past bwd
  CHECK_THROWS_WITH_AS(parse_bitstream(write_bitstream(bs)), "corrupt header",
                       std::runtime_error);
}

TEST_CASE("keyframe decode rejects wrong unit kinds and corrupt payloads") {
  FrameBuffer buf;
  CHECK_THROWS_WITH_AS(decode_keyframe(b_unit(1, 0, 2), buf, 32, 32),
                       "keyframe decoder got a B unit", std::invalid_argument);
  CHECK_THROWS_WITH_AS(decode_keyframe(key_unit(1, FrameType::P), buf, 32, 32),
                       "missing reference frame", std::runtime_error);

  // An I payload opening with the inter mode code is corrupt.
  EncodedFrameUnit inter_in_i = key_unit(0, FrameType::I, 4);
  inter_in_i.payload = {0x20};  // ue = 3
  CHECK_THROWS_WITH_AS(decode_keyframe(inter_in_i, buf, 16, 16),
                       "corrupt keyframe payload", std::runtime_error);

  // Mode codes above inter are invalid everywhere.
  EncodedFrameUnit bad_mode = key_unit(0, FrameType::I, 4);
  bad_mode.payload = {0x28};  // ue = 4
  CHECK_THROWS_WITH_AS(decode_keyframe(bad_mode, buf, 16, 16),
                       "corrupt keyframe payload", std::runtime_error);

  // A valid frame with a residual byte glued on is corrupt.
  const Frame flat = make_frame(32, 32, 128);
  FrameBuffer enc_buf;
  BitLedger ledger;
  RateControlConfig rc;
  const KeyframeResult res = encode_keyframe(flat, enc_buf, ledger, rc,
                                             FrameType::I, 0, 4, 4);
  EncodedFrameUnit extra = res.unit;
  extra.payload.push_back(0x00);
  FrameBuffer dec_buf;
  CHECK_THROWS_WITH_AS(decode_keyframe(extra, dec_buf, 32, 32),
                       "corrupt keyframe payload", std::runtime_error);
}

TEST_CASE("decode_stream reproduces display order, crop and timestamps") {
  // Two flat keyframes plus one intermediate, true size 30x30 padded to 32.
  const Frame key0_src = make_frame(32, 32, 128);
  FrameBuffer enc_buf;
  BitLedger ledger;
  RateControlConfig rc;
  const KeyframeResult k0 = encode_keyframe(key0_src, enc_buf, ledger, rc,
                                            FrameType::I, 0, 2, 4);
  Frame key1_src = make_frame(32, 32, 128);
  key1_src.poc = 2;
  const KeyframeResult k1 = encode_keyframe(key1_src, enc_buf, ledger, rc,
                                            FrameType::P, 1, 2, 4);

  Frame rec0 = k0.recon;
  Frame rec1 = k1.recon;
  rec1.poc = 2;
  const MotionField flow = block_match_keyframes(rec0, rec1, 2);
  EventStream none;
  const BFrameMotion motion = distribute_motion(
      flow, build_activation(none, 0, 40000, 2, 2), 20000, 1);
  const BFrameUnitResult b =
      generate_bframe_unit(rec0, rec1, motion, 1, BFrameConfig{});

  StreamHeader header = small_header(30, 30);
  header.interp_factor = 1;
  header.timebase_num = 1;
  header.timebase_den = 50;  // 20 ms display period

  EncodedFrameUnit k1_unit = k1.unit;
  k1_unit.poc = 2;
  const GopStructure schedule = build_gop_schedule(2, 1, 40000, 4);
  const Bitstream bs = synthesize_stream(header, {k0.unit, k1_unit}, {b.unit},
                                         schedule);

  const std::vector<Frame> frames = decode_stream(bs);
  REQUIRE(frames.size() == 3);
  for (uint32_t i = 0; i < 3; ++i) {
    CHECK(frames[i].poc == i);
    CHECK(frames[i].width == 30);
    CHECK(frames[i].height == 30);
    CHECK(frames[i].timestamp_us == i * 20000);
    for (uint8_t v : frames[i].samples) CHECK(v == 128);
  }
}

TEST_CASE("decode_stream flags units whose references never arrived") {
  Bitstream bs;
  bs.header = small_header();
  bs.header.frame_count = 2;
  EncodedFrameUnit i0 = key_unit(0, FrameType::I, 28);
  // A minimal valid flat I payload for 32x32: four CUs of ue(0)+4 empty
  // blocks... easier to take a real one.
  const Frame flat = make_frame(32, 32, 128);
  FrameBuffer enc_buf;
  BitLedger ledger;
  RateControlConfig rc;
  i0 = encode_keyframe(flat, enc_buf, ledger, rc, FrameType::I, 0, 2, 4).unit;
  bs.units.push_back(i0);
  bs.units.push_back(b_unit(1, 0, 2));  // poc 2 never decoded
  CHECK_THROWS_WITH_AS(decode_stream(bs), "missing reference frame",
                       std::runtime_error);
}
