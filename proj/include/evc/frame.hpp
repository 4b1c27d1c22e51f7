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
#ifndef EVC_FRAME_HPP
#define EVC_FRAME_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

namespace evc {

// Fixed block geometry: CTU = CU = PU = 16x16, TU = 8x8 (four TUs per CU).
struct BlockGrid {
  static constexpr uint32_t kCtuSize = 16;
  static constexpr uint32_t kTuSize = 8;
  static constexpr uint32_t kPuSize = kCtuSize;
};

// 8-bit luma raster. poc is the display-order index, timestamp in
// microseconds. The codec operates on frames whose dimensions are
// multiples of the CTU size; arbitrary inputs are edge-padded on ingest
// and cropped back on output using the container's true dimensions.
struct Frame {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> samples;  // row-major, width * height
  uint32_t poc = 0;
  uint64_t timestamp_us = 0;

  uint8_t at(uint32_t x, uint32_t y) const { return samples[y * width + x]; }
  uint8_t& at(uint32_t x, uint32_t y) { return samples[y * width + x]; }

  bool same_geometry(const Frame& o) const {
    return width == o.width && height == o.height;
  }
};

Frame make_frame(uint32_t width, uint32_t height, uint8_t fill = 0);

// Clamped read: any (x, y) in Z^2 maps to the nearest valid sample.
// Inline — this sits on the motion search inner loop.
inline uint8_t sample_clamped(const Frame& frame, int64_t x, int64_t y) {
  const int64_t cx = std::clamp<int64_t>(x, 0, frame.width - 1);
  const int64_t cy = std::clamp<int64_t>(y, 0, frame.height - 1);
  return frame.samples[static_cast<size_t>(cy) * frame.width + cx];
}

// size x size tile with top-left (bx*size, by*size), row-major.
// Throws "block index out of range" when the tile exceeds the frame.
std::vector<uint8_t> extract_block(const Frame& frame, uint32_t bx,
                                   uint32_t by, uint32_t size);

// Edge-replicate pad up to the next multiple of `multiple` in each
// dimension. Returns the frame unchanged if already aligned.
Frame pad_to_multiple(const Frame& frame, uint32_t multiple = BlockGrid::kCtuSize);

// Top-left crop to (width, height); inverse of pad_to_multiple on output.
Frame crop_frame(const Frame& frame, uint32_t width, uint32_t height);

inline uint32_t round_up(uint32_t v, uint32_t multiple) {
  return (v + multiple - 1) / multiple * multiple;
}

}  // namespace evc

#endif
