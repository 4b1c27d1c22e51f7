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
#include "evc/motion.hpp"

#include <algorithm>

namespace evc {

MotionField make_motion_field(uint32_t blocks_x, uint32_t blocks_y,
                              uint32_t block_size) {
  MotionField f;
  f.blocks_x = blocks_x;
  f.blocks_y = blocks_y;
  f.block_size = block_size;
  f.vectors.assign(static_cast<size_t>(blocks_x) * blocks_y, MotionVector{});
  return f;
}

static int32_t median3(int32_t a, int32_t b, int32_t c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

MotionVector predict_mv(const std::optional<MotionVector>& left,
                        const std::optional<MotionVector>& above,
                        const std::optional<MotionVector>& above_right) {
  const int available = (left ? 1 : 0) + (above ? 1 : 0) + (above_right ? 1 : 0);
  if (available == 0) return MotionVector{};
  if (available == 1) {
    if (left) return *left;
    if (above) return *above;
    return *above_right;
  }
  const MotionVector a = left.value_or(MotionVector{});
  const MotionVector b = above.value_or(MotionVector{});
  const MotionVector c = above_right.value_or(MotionVector{});
  return MotionVector{median3(a.dx, b.dx, c.dx), median3(a.dy, b.dy, c.dy)};
}

}  // namespace evc
