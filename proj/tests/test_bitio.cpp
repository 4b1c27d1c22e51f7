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
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "evc/bitio.hpp"
#include "testutil.hpp"

using namespace evc;

TEST_CASE("bit sink packs MSB first and zero-pads on align") {
  BitSink sink;
  sink.write_bit(1);
  sink.write_bit(0);
  sink.write_bit(1);
  CHECK(sink.bit_count() == 3);
  CHECK_FALSE(sink.byte_aligned());
  sink.byte_align();
  CHECK(sink.byte_aligned());
  CHECK(sink.bytes().size() == 1);
  CHECK(sink.bytes()[0] == 0b10100000);

  sink.write_bits(0x1234, 16);
  const auto bytes = sink.take();
  REQUIRE(bytes.size() == 3);
  CHECK(bytes[1] == 0x12);
  CHECK(bytes[2] == 0x34);
}

TEST_CASE("bit source mirrors the sink") {
  BitSink sink;
  sink.write_bits(0b1011, 4);
  sink.write_bits(0xbeef, 16);
  sink.byte_align();
  const auto bytes = sink.take();

  BitSource src(bytes);
  CHECK(src.read_bits(4) == 0b1011);
  CHECK(src.read_bits(16) == 0xbeef);
  CHECK(src.bit_position() == 20);
  src.byte_align();
  CHECK(src.bit_position() == 24);
  CHECK(src.bits_remaining() == 0);
  CHECK_THROWS_WITH_AS(src.read_bit(), "unexpected end of bitstream",
                       std::runtime_error);
}

TEST_CASE("exp-Golomb codes match the reference table") {
  // value -> (bit pattern, length): 0 -> 1, 1 -> 010, 2 -> 011, 3 -> 00100...
  struct Row {
    uint32_t v;
    uint64_t bits;
    uint32_t len;
  };
  const Row rows[] = {{0, 0b1, 1},     {1, 0b010, 3},   {2, 0b011, 3},
                      {3, 0b00100, 5}, {4, 0b00101, 5}, {5, 0b00110, 5},
                      {6, 0b00111, 5}, {7, 0b0001000, 7}};
  for (const auto& row : rows) {
    BitSink sink;
    write_ue(sink, row.v);
    CHECK(sink.bit_count() == row.len);
    sink.write_bits(0, 64 - row.len);  // flush padding for inspection
    const auto bytes = sink.take();
    uint64_t got = 0;
    for (int i = 0; i < 8; ++i) got = got << 8 | bytes[i];
    CHECK((got >> (64 - row.len)) == row.bits);
  }
}

TEST_CASE("signed exp-Golomb interleaves sign") {
  // 0 -> ue(0), 1 -> ue(1), -1 -> ue(2), 2 -> ue(3), -2 -> ue(4)
  const std::pair<int32_t, uint32_t> rows[] = {
      {0, 0}, {1, 1}, {-1, 2}, {2, 3}, {-2, 4}, {3, 5}, {-3, 6}};
  for (const auto& [sv, uv] : rows) {
    BitSink a, b;
    write_se(a, sv);
    write_ue(b, uv);
    CHECK(a.take() == b.take());
  }
}

TEST_CASE("ue round-trips its full 16-bit range") {
  BitSink sink;
  for (uint32_t v = 0; v <= 65535; ++v) write_ue(sink, v);
  const auto bytes = sink.take();
  BitSource src(bytes);
  for (uint32_t v = 0; v <= 65535; ++v) CHECK(read_ue(src) == v);
}

TEST_CASE("se round-trips its full 16-bit range") {
  BitSink sink;
  for (int32_t v = -32768; v <= 32767; ++v) write_se(sink, v);
  const auto bytes = sink.take();
  BitSource src(bytes);
  for (int32_t v = -32768; v <= 32767; ++v) CHECK(read_se(src) == v);
}

TEST_CASE("malformed exp-Golomb prefixes are rejected") {
  // 40 zero bits: no plausible code starts with more than 31 zeros.
  BitSink sink;
  sink.write_bits(0, 40);
  const auto bytes = sink.take();
  BitSource src(bytes);
  CHECK_THROWS_WITH_AS(read_ue(src), "corrupt exp-Golomb code",
                       std::runtime_error);

  // Truncated mid-code: prefix promises more bits than remain.
  BitSink sink2;
  sink2.write_bits(0, 7);
  const auto bytes2 = sink2.take();
  BitSource src2(bytes2);
  CHECK_THROWS_WITH_AS(read_ue(src2), "unexpected end of bitstream",
                       std::runtime_error);
}

TEST_CASE("coefficient coding: all-zero block costs one bit") {
  std::array<int32_t, 64> scanned{};
  BitSink sink;
  write_coeffs(sink, scanned);
  CHECK(sink.bit_count() == 1);

  const auto bytes = sink.take();
  BitSource src(bytes);
  CHECK(read_coeffs(src) == scanned);
}

TEST_CASE("coefficient coding round-trips sparse and dense blocks") {
  evtest::Rng rng(0x51ab);
  for (int iter = 0; iter < 500; ++iter) {
    std::array<int32_t, 64> scanned{};
    const int nonzero = rng.range(0, 64);
    for (int i = 0; i < nonzero; ++i) {
      int v = rng.range(-32768, 32767);
      if (v == 0) v = 1;
      scanned[rng.below(64)] = v;
    }
    BitSink sink;
    write_coeffs(sink, scanned);
    const auto bytes = sink.take();
    BitSource src(bytes);
    CHECK(read_coeffs(src) == scanned);
  }
}

TEST_CASE("coefficient coding rejects inconsistent streams") {
  {
    BitSink sink;
    write_ue(sink, 65);  // more nonzeros than slots
    const auto bytes = sink.take();
    BitSource src(bytes);
    CHECK_THROWS_WITH_AS(read_coeffs(src), "corrupt coefficient block",
                         std::runtime_error);
  }
  {
    BitSink sink;  // single coefficient whose run walks off the block
    write_ue(sink, 1);
    write_ue(sink, 64);
    write_se(sink, 5);
    const auto bytes = sink.take();
    BitSource src(bytes);
    CHECK_THROWS_WITH_AS(read_coeffs(src), "corrupt coefficient block",
                         std::runtime_error);
  }
  {
    BitSink sink;  // a stored zero is not a legal nonzero entry
    write_ue(sink, 1);
    write_ue(sink, 0);
    write_se(sink, 0);
    const auto bytes = sink.take();
    BitSource src(bytes);
    CHECK_THROWS_WITH_AS(read_coeffs(src), "corrupt coefficient block",
                         std::runtime_error);
  }
}
