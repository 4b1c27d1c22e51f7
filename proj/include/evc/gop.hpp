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
#ifndef EVC_GOP_HPP
#define EVC_GOP_HPP

#include <cstdint>
#include <vector>

namespace evc {

enum class FrameType : uint8_t { I = 0, P = 1, B = 2 };

const char* frame_type_name(FrameType t);

struct FrameSlot {
  uint32_t poc = 0;
  FrameType type = FrameType::I;
  uint64_t timestamp_us = 0;

  friend bool operator==(const FrameSlot&, const FrameSlot&) = default;
};

// Display-ordered schedule. gop_length counts keyframes per GOP: a GOP
// opens with I every gop_length keyframes, the rest are P. interp_factor
// B slots sit between consecutive keyframes.
struct GopStructure {
  uint32_t gop_length = 4;
  uint32_t interp_factor = 3;
  std::vector<FrameSlot> slots;

  uint32_t keyframe_count() const {
    return static_cast<uint32_t>((slots.size() + interp_factor) /
                                 (1 + static_cast<size_t>(interp_factor)));
  }
};

// Keyframe j sits at poc j*(interp_factor+1), timestamp j*keyframe_period_us.
// B timestamps uniformly subdivide each keyframe interval, rounded half-up
// to integer microseconds. Throws "need at least two keyframes" if
// n_keyframes < 2.
GopStructure build_gop_schedule(uint32_t n_keyframes, uint32_t interp_factor,
                                uint64_t keyframe_period_us,
                                uint32_t gop_length = 4);

}  // namespace evc

#endif
