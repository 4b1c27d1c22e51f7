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
#ifndef EVC_MOTION_HPP
#define EVC_MOTION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "evc/frame.hpp"

namespace evc {

struct MotionVector {
  int32_t dx = 0;
  int32_t dy = 0;

  friend bool operator==(const MotionVector&, const MotionVector&) = default;
};

// Per-block integer motion vectors at one timestamp. target_poc is the
// frame being predicted, reference_poc the frame pointed into.
struct MotionField {
  uint32_t blocks_x = 0;
  uint32_t blocks_y = 0;
  uint32_t block_size = BlockGrid::kCtuSize;
  std::vector<MotionVector> vectors;  // row-major, blocks_x * blocks_y
  uint32_t target_poc = 0;
  uint32_t reference_poc = 0;

  const MotionVector& at(uint32_t bx, uint32_t by) const {
    return vectors[by * blocks_x + bx];
  }
  MotionVector& at(uint32_t bx, uint32_t by) {
    return vectors[by * blocks_x + bx];
  }
};

MotionField make_motion_field(uint32_t blocks_x, uint32_t blocks_y,
                              uint32_t block_size = BlockGrid::kCtuSize);

// Causal motion vector predictor over the left / above / above-right
// neighbors. Exactly one available neighbor is used directly; otherwise
// missing slots contribute (0,0) and the component-wise median of the
// three is taken. No neighbors -> (0,0).
MotionVector predict_mv(const std::optional<MotionVector>& left,
                        const std::optional<MotionVector>& above,
                        const std::optional<MotionVector>& above_right);

// Raster-order MV prediction context over a CU grid. A CU participates as
// a neighbor only after set() marks it coded; encoder and decoder drive an
// identical instance, which is what keeps MVD chains in sync.
class MvChain {
 public:
  MvChain(uint32_t blocks_x, uint32_t blocks_y)
      : blocks_x_(blocks_x),
        blocks_y_(blocks_y),
        mvs_(static_cast<size_t>(blocks_x) * blocks_y),
        coded_(mvs_.size(), 0) {}

  MotionVector predict(uint32_t bx, uint32_t by) const {
    return predict_mv(get(int64_t(bx) - 1, by), get(bx, int64_t(by) - 1),
                      get(int64_t(bx) + 1, int64_t(by) - 1));
  }

  void set(uint32_t bx, uint32_t by, MotionVector mv) {
    const size_t i = static_cast<size_t>(by) * blocks_x_ + bx;
    mvs_[i] = mv;
    coded_[i] = 1;
  }

 private:
  std::optional<MotionVector> get(int64_t bx, int64_t by) const {
    if (bx < 0 || by < 0 || bx >= blocks_x_ || by >= blocks_y_)
      return std::nullopt;
    const size_t i = static_cast<size_t>(by) * blocks_x_ + bx;
    if (!coded_[i]) return std::nullopt;
    return mvs_[i];
  }

  int64_t blocks_x_;
  int64_t blocks_y_;
  std::vector<MotionVector> mvs_;
  std::vector<uint8_t> coded_;
};

}  // namespace evc

#endif
