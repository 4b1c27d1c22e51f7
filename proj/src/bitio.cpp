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
#include "evc/bitio.hpp"

#include <bit>
#include <stdexcept>

namespace evc {

void BitSink::write_bit(uint32_t bit) {
  const uint32_t offset = bit_count_ % 8;
  if (offset == 0) buffer_.push_back(0);
  if (bit & 1) buffer_.back() |= static_cast<uint8_t>(0x80u >> offset);
  ++bit_count_;
}

void BitSink::write_bits(uint64_t value, uint32_t count) {
  for (uint32_t i = count; i-- > 0;) {
    write_bit(static_cast<uint32_t>(value >> i) & 1);
  }
}

void BitSink::byte_align() {
  while (bit_count_ % 8 != 0) write_bit(0);
}

const std::vector<uint8_t>& BitSink::bytes() const {
  if (!byte_aligned()) throw std::logic_error("bit sink not byte-aligned");
  return buffer_;
}

std::vector<uint8_t> BitSink::take() {
  byte_align();
  bit_count_ = 0;
  return std::move(buffer_);
}

uint32_t BitSource::read_bit() {
  if (pos_ >= data_.size() * 8ull) {
    throw std::runtime_error("unexpected end of bitstream");
  }
  const uint8_t byte = data_[pos_ / 8];
  const uint32_t bit = (byte >> (7 - pos_ % 8)) & 1;
  ++pos_;
  return bit;
}

uint64_t BitSource::read_bits(uint32_t count) {
  uint64_t v = 0;
  for (uint32_t i = 0; i < count; ++i) v = (v << 1) | read_bit();
  return v;
}

void BitSource::byte_align() {
  while (pos_ % 8 != 0) read_bit();
}

void write_ue(BitSink& sink, uint32_t v) {
  if (v == 0xffffffffu) throw std::invalid_argument("ue value out of range");
  const uint64_t code = static_cast<uint64_t>(v) + 1;
  const uint32_t len = std::bit_width(code);
  sink.write_bits(0, len - 1);
  sink.write_bits(code, len);
}

uint32_t read_ue(BitSource& source) {
  uint32_t zeros = 0;
  while (source.read_bit() == 0) {
    if (++zeros > 31) throw std::runtime_error("corrupt exp-Golomb code");
  }
  const uint64_t rest = source.read_bits(zeros);
  return static_cast<uint32_t>(((1ull << zeros) | rest) - 1);
}

void write_se(BitSink& sink, int32_t v) {
  const int64_t sv = v;
  const uint32_t mapped = static_cast<uint32_t>(sv <= 0 ? -2 * sv : 2 * sv - 1);
  write_ue(sink, mapped);
}

int32_t read_se(BitSource& source) {
  const uint32_t u = read_ue(source);
  if (u % 2 == 0) return -static_cast<int32_t>(u / 2);
  return static_cast<int32_t>(u / 2 + 1);
}

void write_coeffs(BitSink& sink, const std::array<int32_t, 64>& scanned) {
  uint32_t nonzero = 0;
  for (int32_t v : scanned) nonzero += (v != 0);
  write_ue(sink, nonzero);
  uint32_t run = 0;
  for (int32_t v : scanned) {
    if (v == 0) {
      ++run;
      continue;
    }
    write_ue(sink, run);
    write_se(sink, v);
    run = 0;
  }
}

std::array<int32_t, 64> read_coeffs(BitSource& source) {
  std::array<int32_t, 64> out{};
  const uint32_t nonzero = read_ue(source);
  if (nonzero > 64) throw std::runtime_error("corrupt coefficient block");
  uint32_t pos = 0;
  for (uint32_t i = 0; i < nonzero; ++i) {
    const uint32_t run = read_ue(source);
    pos += run;
    if (pos >= 64) throw std::runtime_error("corrupt coefficient block");
    const int32_t value = read_se(source);
    if (value == 0) throw std::runtime_error("corrupt coefficient block");
    out[pos++] = value;
  }
  return out;
}

}  // namespace evc
