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
#include <optional>

#include "doctest.h"
#include "evc/motion.hpp"
#include "testutil.hpp"

using namespace evc;

namespace {
const std::optional<MotionVector> kNone = std::nullopt;
MotionVector mv(int32_t dx, int32_t dy) { return MotionVector{dx, dy}; }
}  // namespace

TEST_CASE("mv predictor with no neighbors is zero") {
  CHECK(predict_mv(kNone, kNone, kNone) == mv(0, 0));
}

TEST_CASE("a single available neighbor is used directly") {
  CHECK(predict_mv(mv(5, -3), kNone, kNone) == mv(5, -3));
  CHECK(predict_mv(kNone, mv(-2, 7), kNone) == mv(-2, 7));
  CHECK(predict_mv(kNone, kNone, mv(1, 1)) == mv(1, 1));
}

TEST_CASE("two or three neighbors take a component-wise median") {
  // Missing slots contribute (0,0).
  CHECK(predict_mv(mv(4, 4), mv(2, 2), kNone) == mv(2, 2));
  CHECK(predict_mv(mv(4, 4), kNone, mv(-6, 2)) == mv(0, 2));
  CHECK(predict_mv(mv(1, 9), mv(3, -5), mv(5, 7)) == mv(3, 7));
  CHECK(predict_mv(mv(-1, -1), mv(-1, -1), mv(8, 8)) == mv(-1, -1));
  // Components are independent.
  CHECK(predict_mv(mv(10, 0), mv(0, 10), mv(5, 5)) == mv(5, 5));
}

TEST_CASE("mv chain exposes only already-coded neighbors") {
  MvChain chain(3, 2);
  // Nothing coded yet: first CU predicts zero.
  CHECK(chain.predict(0, 0) == mv(0, 0));
  chain.set(0, 0, mv(4, 2));

  // (1,0): left is the only causal neighbor on the top row.
  CHECK(chain.predict(1, 0) == mv(4, 2));
  chain.set(1, 0, mv(4, 2));
  CHECK(chain.predict(2, 0) == mv(4, 2));
  chain.set(2, 0, mv(6, 0));

  // (0,1): no left; above (0,0) and above-right (1,0) are coded ->
  // median of {(0,0) missing-left, (4,2), (4,2)}.
  CHECK(chain.predict(0, 1) == mv(4, 2));
  chain.set(0, 1, mv(0, 0));

  // (1,1): left (0,1)=(0,0), above (1,0)=(4,2), above-right (2,0)=(6,0)
  // -> median (4,0).
  CHECK(chain.predict(1, 1) == mv(4, 0));

  // (2,1) before its left neighbor is coded: above (2,0), no above-right
  // (off grid), no left (uncoded) -> exactly one neighbor -> (6,0).
  CHECK(chain.predict(2, 1) == mv(6, 0));
}

TEST_CASE("uniform motion collapses every later predictor to the motion") {
  // With a global vector, each CU after the first predicts it exactly, so
  // the differential chain is all zeros.
  MvChain chain(4, 4);
  const MotionVector global = mv(-3, 5);
  for (uint32_t by = 0; by < 4; ++by) {
    for (uint32_t bx = 0; bx < 4; ++bx) {
      const MotionVector pred = chain.predict(bx, by);
      if (bx == 0 && by == 0) {
        CHECK(pred == mv(0, 0));
      } else {
        CHECK(pred == global);
      }
      chain.set(bx, by, global);
    }
  }
}

TEST_CASE("motion fields index row-major") {
  MotionField f = make_motion_field(3, 2);
  CHECK(f.blocks_x == 3);
  CHECK(f.blocks_y == 2);
  CHECK(f.block_size == 16);
  CHECK(f.vectors.size() == 6);
  f.at(2, 1) = mv(9, -9);
  CHECK(f.vectors[5] == mv(9, -9));
  CHECK(f.at(2, 1) == mv(9, -9));
}
