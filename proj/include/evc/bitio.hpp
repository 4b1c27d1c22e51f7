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
#ifndef EVC_BITIO_HPP
#define EVC_BITIO_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace evc {

// MSB-first bit writer. byte_align pads with zero bits.
class BitSink {
 public:
  void write_bit(uint32_t bit);
  void write_bits(uint64_t value, uint32_t count);  // MSB of value first
  void byte_align();

  uint64_t bit_count() const { return bit_count_; }
  bool byte_aligned() const { return bit_count_ % 8 == 0; }
  const std::vector<uint8_t>& bytes() const;  // requires byte alignment
  std::vector<uint8_t> take();                // aligns, then moves the buffer

 private:
  std::vector<uint8_t> buffer_;
  uint64_t bit_count_ = 0;
};

// MSB-first bit reader over a borrowed byte buffer. Reads past the end
// throw "unexpected end of bitstream".
class BitSource {
 public:
  explicit BitSource(std::span<const uint8_t> data) : data_(data) {}

  uint32_t read_bit();
  uint64_t read_bits(uint32_t count);
  void byte_align();  // skips to the next byte boundary

  uint64_t bit_position() const { return pos_; }
  uint64_t bits_remaining() const { return data_.size() * 8ull - pos_; }

 private:
  std::span<const uint8_t> data_;
  uint64_t pos_ = 0;
};

// Order-0 exp-Golomb: v is coded as (bitlen(v+1)-1) zeros then v+1.
void write_ue(BitSink& sink, uint32_t v);
uint32_t read_ue(BitSource& source);

// Signed mapping: v <= 0 -> -2v, v > 0 -> 2v-1, then ue.
void write_se(BitSink& sink, int32_t v);
int32_t read_se(BitSource& source);

// Run-length coefficient coding over a 64-value scan:
// ue(nonzero_count), then per nonzero: ue(zero_run_before_it), se(value).
void write_coeffs(BitSink& sink, const std::array<int32_t, 64>& scanned);
std::array<int32_t, 64> read_coeffs(BitSource& source);

}  // namespace evc

#endif
