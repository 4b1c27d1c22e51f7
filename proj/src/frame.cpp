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
#include "evc/frame.hpp"

#include <algorithm>
#include <stdexcept>

namespace evc {

Frame make_frame(uint32_t width, uint32_t height, uint8_t fill) {
  Frame f;
  f.width = width;
  f.height = height;
  f.samples.assign(static_cast<size_t>(width) * height, fill);
  return f;
}

std::vector<uint8_t> extract_block(const Frame& frame, uint32_t bx,
                                   uint32_t by, uint32_t size) {
  const uint64_t x0 = static_cast<uint64_t>(bx) * size;
  const uint64_t y0 = static_cast<uint64_t>(by) * size;
  if (x0 + size > frame.width || y0 + size > frame.height) {
    throw std::out_of_range("block index out of range");
  }
  std::vector<uint8_t> tile(static_cast<size_t>(size) * size);
  for (uint32_t r = 0; r < size; ++r) {
    const uint8_t* src = frame.samples.data() + (y0 + r) * frame.width + x0;
    std::copy(src, src + size, tile.data() + static_cast<size_t>(r) * size);
  }
  return tile;
}

Frame pad_to_multiple(const Frame& frame, uint32_t multiple) {
  const uint32_t pw = round_up(frame.width, multiple);
  const uint32_t ph = round_up(frame.height, multiple);
  if (pw == frame.width && ph == frame.height) return frame;

  Frame out;
  out.width = pw;
  out.height = ph;
  out.poc = frame.poc;
  out.timestamp_us = frame.timestamp_us;
  out.samples.resize(static_cast<size_t>(pw) * ph);
  for (uint32_t y = 0; y < ph; ++y) {
    const uint32_t sy = std::min(y, frame.height - 1);
    const uint8_t* src = frame.samples.data() + static_cast<size_t>(sy) * frame.width;
    uint8_t* dst = out.samples.data() + static_cast<size_t>(y) * pw;
    std::copy(src, src + frame.width, dst);
    std::fill(dst + frame.width, dst + pw, src[frame.width - 1]);
  }
  return out;
}

Frame crop_frame(const Frame& frame, uint32_t width, uint32_t height) {
  if (width > frame.width || height > frame.height) {
    throw std::out_of_range("crop exceeds frame bounds");
  }
  if (width == frame.width && height == frame.height) return frame;

  Frame out;
  out.width = width;
  out.height = height;
  out.poc = frame.poc;
  out.timestamp_us = frame.timestamp_us;
  out.samples.resize(static_cast<size_t>(width) * height);
  for (uint32_t y = 0; y < height; ++y) {
    const uint8_t* src = frame.samples.data() + static_cast<size_t>(y) * frame.width;
    std::copy(src, src + width, out.samples.data() + static_cast<size_t>(y) * width);
  }
  return out;
}

}  // namespace evc
