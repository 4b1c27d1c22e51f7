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
#ifndef EVC_BFRAME_HPP
#define EVC_BFRAME_HPP

#include <cstdint>
#include <vector>

#include "evc/frame.hpp"
#include "evc/motion.hpp"
#include "evc/motion_estimation.hpp"
#include "evc/stream.hpp"

namespace evc {

struct BFrameConfig {
  // Per-block SAD above which the two keyframe candidates are considered to
  // disagree (occlusion / bad flow) and one-directional prediction is used:
  // 8 gray levels per sample over a 16x16 block.
  uint64_t t_occ = 8 * BlockGrid::kCtuSize * BlockGrid::kCtuSize;
};

// An intermediate frame's complete coded form: per-CU prediction mode plus
// motion vector differences, nothing else. There is no residual syntax —
// the frame is never available at encode time to take a residual against.
struct BFrameUnitResult {
  EncodedFrameUnit unit;
  std::vector<uint64_t> cu_bits;       // raster order, pad bits on last
  std::vector<BMode> modes;            // raster order
  std::vector<MotionVector> fwd_mvs;   // meaningful where mode != bwd
  std::vector<MotionVector> bwd_mvs;   // meaningful where mode != fwd
};

// Builds the coded unit for the intermediate frame at motion.to_fwd's
// target_poc. The source frame does not appear in the signature because the
// encoder never has it. Throws "motion field does not cover frame" when the
// fields do not span the reference geometry.
BFrameUnitResult generate_bframe_unit(const Frame& fwd_ref,
                                      const Frame& bwd_ref,
                                      const BFrameMotion& motion, uint32_t poc,
                                      const BFrameConfig& cfg);

// Exact size of the unit generate_bframe_unit would emit, in bits. Runs the
// same mode decisions, so operation counters advance identically.
uint64_t estimate_bframe_bits(const Frame& fwd_ref, const Frame& bwd_ref,
                              const BFrameMotion& motion, uint32_t poc,
                              const BFrameConfig& cfg);

}  // namespace evc

#endif
