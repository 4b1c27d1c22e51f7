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
#ifndef EVC_STREAM_HPP
#define EVC_STREAM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "evc/frame.hpp"
#include "evc/gop.hpp"

namespace evc {

// .evc container layout, all little-endian, every payload byte-aligned:
//
//   magic "EVC1"
//   u16 width, u16 height        true display dimensions (codec pads to CTU)
//   u8 block_size (16), u8 tu_size (8)
//   u8 interp_factor, u8 gop_length
//   u32 frame_count
//   u8 base_qp
//   u32 timebase_num, u32 timebase_den   display frame period in seconds
//
// followed by frame units in decoding order:
//
//   u8 frame_type (0=I, 1=P, 2=B)
//   u32 poc
//   I/P: u8 qp          B: u32 fwd_ref_poc, u32 bwd_ref_poc
//   u32 payload_size, payload bytes
struct StreamHeader {
  uint16_t width = 0;
  uint16_t height = 0;
  uint8_t block_size = BlockGrid::kCtuSize;
  uint8_t tu_size = BlockGrid::kTuSize;
  uint8_t interp_factor = 0;
  uint8_t gop_length = 4;
  uint32_t frame_count = 0;
  uint8_t base_qp = 28;
  uint32_t timebase_num = 1;
  uint32_t timebase_den = 30;

  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

struct EncodedFrameUnit {
  FrameType frame_type = FrameType::I;
  uint32_t poc = 0;
  int qp = 0;                // present iff I/P
  uint32_t fwd_ref_poc = 0;  // present iff B
  uint32_t bwd_ref_poc = 0;  // present iff B
  std::vector<uint8_t> payload;

  friend bool operator==(const EncodedFrameUnit&, const EncodedFrameUnit&) = default;
};

struct Bitstream {
  StreamHeader header;
  std::vector<EncodedFrameUnit> units;  // decoding order

  friend bool operator==(const Bitstream&, const Bitstream&) = default;
};

// Decoding order: opening I first, then per keyframe interval the closing
// keyframe before the B frames it brackets. Display order is recoverable
// from poc. Throws "incomplete GOP" when a slot has no unit and "dangling
// reference" when a B unit's references are missing.
Bitstream synthesize_stream(const StreamHeader& header,
                            const std::vector<EncodedFrameUnit>& key_units,
                            const std::vector<EncodedFrameUnit>& b_units,
                            const GopStructure& schedule);

std::vector<uint8_t> write_bitstream(const Bitstream& bs);
void write_bitstream_file(const Bitstream& bs, const std::string& path);
Bitstream parse_bitstream(const std::vector<uint8_t>& data);
Bitstream parse_bitstream_file(const std::string& path);

uint64_t container_header_bytes(const Bitstream& bs);
uint64_t payload_bytes(const Bitstream& bs);

struct FrameBuffer;  // keyframe_codec.hpp

// Inverse of the keyframe encoder's reconstruction path; updates buf.
Frame decode_keyframe(const EncodedFrameUnit& unit, FrameBuffer& buf,
                      uint32_t padded_width, uint32_t padded_height);

// Motion-compensates one intermediate frame from its two keyframes.
// No residual is parsed; none exists in the payload.
Frame decode_bframe(const EncodedFrameUnit& unit, const Frame& fwd_ref,
                    const Frame& bwd_ref);

// Decodes units in stored order and emits frames sorted by poc, cropped to
// the header's true dimensions.
std::vector<Frame> decode_stream(const Bitstream& bs);

}  // namespace evc

#endif
