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
#ifndef EVC_MOTION_ESTIMATION_HPP
#define EVC_MOTION_ESTIMATION_HPP

#include <cstdint>
#include <vector>

#include "evc/events.hpp"
#include "evc/frame.hpp"
#include "evc/keyframe_codec.hpp"
#include "evc/motion.hpp"

namespace evc {

// Exhaustive per-block search from key_t into key_t1. The returned field is
// anchored on key_t's block grid: vectors[b] is the displacement of block
// b's content between the two keyframes (reference_poc = key_t.poc,
// target_poc = key_t1.poc).
MotionField block_match_keyframes(const Frame& key_t, const Frame& key_t1,
                                  int range);

// Per-block cumulative event counts over one keyframe interval (t0, t1].
// Blocks with fewer than n_min events fall back to linear timing — too few
// events means the block either did not move or the sensor saw nothing, and
// a handful of noise events must not steer its motion.
struct EventActivation {
  uint64_t t0_us = 0;
  uint64_t t1_us = 0;
  uint32_t blocks_x = 0;
  uint32_t blocks_y = 0;
  uint32_t n_min = 8;
  std::vector<std::vector<uint64_t>> block_times;  // sorted, per block

  uint64_t block_total(uint32_t bx, uint32_t by) const {
    return block_times[static_cast<size_t>(by) * blocks_x + bx].size();
  }
};

// Buckets the events of (t0, t1] onto the padded block grid. Events are in
// sensor coordinates, which always lie inside the padded frame.
EventActivation build_activation(const EventStream& events, uint64_t t0_us,
                                 uint64_t t1_us, uint32_t blocks_x,
                                 uint32_t blocks_y, uint32_t n_min = 8);

// Fraction of the block's interval motion completed by tau: the block's
// event count up to tau over its interval total, or linear interpolation
// when the block is below n_min. Throws "timestamp outside keyframe
// interval" for tau outside [t0, t1].
double event_fraction(const EventActivation& act, uint32_t bx, uint32_t by,
                      uint64_t tau_us);

// Motion for one intermediate frame, split from the keyframe flow.
struct BFrameMotion {
  MotionField to_fwd;  // points into the earlier keyframe
  MotionField to_bwd;  // points into the later keyframe
  std::vector<double> alpha;  // per block, row-major
};

// Splits the inter-keyframe flow at tau: a block whose content moved v over
// the whole interval has covered alpha*v of it by tau, so the intermediate
// block reaches the earlier keyframe with -round(alpha*v) and the later one
// with round((1-alpha)*v). Throws "motion field does not cover frame" on a
// grid mismatch with the activation.
BFrameMotion distribute_motion(const MotionField& flow,
                               const EventActivation& act, uint64_t tau_us,
                               uint32_t tau_poc);

enum class BMode : uint32_t {
  bi = 0,
  fwd = 1,
  bwd = 2,
};

const char* bmode_name(BMode mode);

// Occlusion test for one intermediate block: warp both keyframe candidates
// and compare. Agreement (SAD <= t_occ) picks bidirectional averaging;
// otherwise the temporally nearer keyframe wins (alpha <= 0.5 -> fwd).
// Counts two prediction warps and one SAD evaluation.
BMode select_prediction_mode(const Frame& fwd_ref, const Frame& bwd_ref,
                             uint32_t bx, uint32_t by, MotionVector to_fwd,
                             MotionVector to_bwd, double alpha, uint64_t t_occ);

}  // namespace evc

#endif
