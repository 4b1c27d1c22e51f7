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
#include "evc/gop.hpp"

#include <stdexcept>

namespace evc {

const char* frame_type_name(FrameType t) {
  switch (t) {
    case FrameType::I: return "I";
    case FrameType::P: return "P";
    case FrameType::B: return "B";
  }
  return "?";
}

GopStructure build_gop_schedule(uint32_t n_keyframes, uint32_t interp_factor,
                                uint64_t keyframe_period_us,
                                uint32_t gop_length) {
  if (n_keyframes < 2) {
    throw std::invalid_argument("need at least two keyframes");
  }
  if (gop_length == 0) {
    throw std::invalid_argument("gop length must be positive");
  }

  GopStructure g;
  g.gop_length = gop_length;
  g.interp_factor = interp_factor;
  g.slots.reserve(n_keyframes + static_cast<size_t>(n_keyframes - 1) * interp_factor);

  uint32_t poc = 0;
  for (uint32_t k = 0; k < n_keyframes; ++k) {
    FrameSlot key;
    key.poc = poc++;
    key.type = (k % gop_length == 0) ? FrameType::I : FrameType::P;
    key.timestamp_us = k * keyframe_period_us;
    g.slots.push_back(key);

    if (k + 1 == n_keyframes) break;
    const uint64_t t0 = key.timestamp_us;
    const uint64_t span = keyframe_period_us;
    const uint64_t den = interp_factor + 1;
    for (uint32_t j = 1; j <= interp_factor; ++j) {
      FrameSlot b;
      b.poc = poc++;
      b.type = FrameType::B;
      b.timestamp_us = t0 + (span * j + den / 2) / den;  // round half-up
      g.slots.push_back(b);
    }
  }
  return g;
}

}  // namespace evc
