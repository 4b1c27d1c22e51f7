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
#include "evc/motion_estimation.hpp"

#include <algorithm>
#include <stdexcept>

#include "evc/counters.hpp"
#include "evc/transform.hpp"

namespace evc {

MotionField block_match_keyframes(const Frame& key_t, const Frame& key_t1,
                                  int range) {
  if (!key_t.same_geometry(key_t1))
    throw std::invalid_argument("geometry mismatch");
  const uint32_t blocks_x = key_t.width / BlockGrid::kCtuSize;
  const uint32_t blocks_y = key_t.height / BlockGrid::kCtuSize;
  MotionField field = make_motion_field(blocks_x, blocks_y);
  field.reference_poc = key_t.poc;
  field.target_poc = key_t1.poc;
  for (uint32_t by = 0; by < blocks_y; ++by)
    for (uint32_t bx = 0; bx < blocks_x; ++bx)
      field.at(bx, by) = motion_search_p(key_t, key_t1, bx, by, range).mv;
  return field;
}

EventActivation build_activation(const EventStream& events, uint64_t t0_us,
                                 uint64_t t1_us, uint32_t blocks_x,
                                 uint32_t blocks_y, uint32_t n_min) {
  if (t1_us <= t0_us)
    throw std::invalid_argument("timestamp outside keyframe interval");
  EventActivation act;
  act.t0_us = t0_us;
  act.t1_us = t1_us;
  act.blocks_x = blocks_x;
  act.blocks_y = blocks_y;
  act.n_min = n_min;
  act.block_times.assign(static_cast<size_t>(blocks_x) * blocks_y, {});
  for (const Event& ev : events.events) {
    if (ev.t_us <= t0_us || ev.t_us > t1_us) continue;
    const uint32_t bx = ev.x / BlockGrid::kCtuSize;
    const uint32_t by = ev.y / BlockGrid::kCtuSize;
    if (bx >= blocks_x || by >= blocks_y) continue;  // outside padded grid
    act.block_times[static_cast<size_t>(by) * blocks_x + bx].push_back(ev.t_us);
  }
  for (auto& times : act.block_times) std::sort(times.begin(), times.end());
  return act;
}

double event_fraction(const EventActivation& act, uint32_t bx, uint32_t by,
                      uint64_t tau_us) {
  if (tau_us < act.t0_us || tau_us > act.t1_us)
    throw std::runtime_error("timestamp outside keyframe interval");
  const auto& times = act.block_times[static_cast<size_t>(by) * act.blocks_x + bx];
  if (times.size() < act.n_min) {
    return static_cast<double>(tau_us - act.t0_us) /
           static_cast<double>(act.t1_us - act.t0_us);
  }
  const auto upto = std::upper_bound(times.begin(), times.end(), tau_us);
  return static_cast<double>(upto - times.begin()) /
         static_cast<double>(times.size());
}

BFrameMotion distribute_motion(const MotionField& flow,
                               const EventActivation& act, uint64_t tau_us,
                               uint32_t tau_poc) {
  if (flow.blocks_x != act.blocks_x || flow.blocks_y != act.blocks_y)
    throw std::runtime_error("motion field does not cover frame");

  BFrameMotion out;
  out.to_fwd = make_motion_field(flow.blocks_x, flow.blocks_y, flow.block_size);
  out.to_fwd.target_poc = tau_poc;
  out.to_fwd.reference_poc = flow.reference_poc;
  out.to_bwd = make_motion_field(flow.blocks_x, flow.blocks_y, flow.block_size);
  out.to_bwd.target_poc = tau_poc;
  out.to_bwd.reference_poc = flow.target_poc;
  out.alpha.resize(flow.vectors.size());

  for (uint32_t by = 0; by < flow.blocks_y; ++by) {
    for (uint32_t bx = 0; bx < flow.blocks_x; ++bx) {
      const double alpha = event_fraction(act, bx, by, tau_us);
      const MotionVector v = flow.at(bx, by);
      out.alpha[static_cast<size_t>(by) * flow.blocks_x + bx] = alpha;
      out.to_fwd.at(bx, by) = {
          static_cast<int32_t>(-round_half_away(alpha * v.dx)),
          static_cast<int32_t>(-round_half_away(alpha * v.dy))};
      out.to_bwd.at(bx, by) = {
          static_cast<int32_t>(round_half_away((1.0 - alpha) * v.dx)),
          static_cast<int32_t>(round_half_away((1.0 - alpha) * v.dy))};
    }
  }
  return out;
}

const char* bmode_name(BMode mode) {
  switch (mode) {
    case BMode::bi: return "bi";
    case BMode::fwd: return "fwd";
    case BMode::bwd: return "bwd";
  }
  return "?";
}

BMode select_prediction_mode(const Frame& fwd_ref, const Frame& bwd_ref,
                             uint32_t bx, uint32_t by, MotionVector to_fwd,
                             MotionVector to_bwd, double alpha, uint64_t t_occ) {
  const Tile16 from_fwd = inter_predict_tile(fwd_ref, bx, by, to_fwd);
  const Tile16 from_bwd = inter_predict_tile(bwd_ref, bx, by, to_bwd);
  op_counters().mode_decision_warps += 2;
  op_counters().sad_evals += 1;
  const uint64_t disagreement = tile_sad(from_fwd, from_bwd);
  if (disagreement <= t_occ) return BMode::bi;
  return alpha <= 0.5 ? BMode::fwd : BMode::bwd;
}

}  // namespace evc
