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
#include "evc/bframe.hpp"

#include <stdexcept>

#include "evc/bitio.hpp"
#include "evc/keyframe_codec.hpp"

namespace evc {

BFrameUnitResult generate_bframe_unit(const Frame& fwd_ref,
                                      const Frame& bwd_ref,
                                      const BFrameMotion& motion, uint32_t poc,
                                      const BFrameConfig& cfg) {
  if (!fwd_ref.same_geometry(bwd_ref))
    throw std::invalid_argument("geometry mismatch");
  if (!(fwd_ref.poc < poc && poc < bwd_ref.poc))
    throw std::invalid_argument("B frame references must bracket it");

  const uint32_t blocks_x = fwd_ref.width / BlockGrid::kCtuSize;
  const uint32_t blocks_y = fwd_ref.height / BlockGrid::kCtuSize;
  if (motion.to_fwd.blocks_x != blocks_x || motion.to_fwd.blocks_y != blocks_y ||
      motion.to_bwd.blocks_x != blocks_x || motion.to_bwd.blocks_y != blocks_y)
    throw std::runtime_error("motion field does not cover frame");

  BFrameUnitResult out;
  out.modes.resize(static_cast<size_t>(blocks_x) * blocks_y);
  out.fwd_mvs.resize(out.modes.size());
  out.bwd_mvs.resize(out.modes.size());
  out.cu_bits.reserve(out.modes.size());

  MvChain fwd_chain(blocks_x, blocks_y);
  MvChain bwd_chain(blocks_x, blocks_y);
  BitSink sink;

  for (uint32_t by = 0; by < blocks_y; ++by) {
    for (uint32_t bx = 0; bx < blocks_x; ++bx) {
      const uint64_t bits_before = sink.bit_count();
      const size_t idx = static_cast<size_t>(by) * blocks_x + bx;
      const MotionVector to_fwd = motion.to_fwd.at(bx, by);
      const MotionVector to_bwd = motion.to_bwd.at(bx, by);
      const BMode mode =
          select_prediction_mode(fwd_ref, bwd_ref, bx, by, to_fwd, to_bwd,
                                 motion.alpha[idx], cfg.t_occ);

      out.modes[idx] = mode;
      out.fwd_mvs[idx] = to_fwd;
      out.bwd_mvs[idx] = to_bwd;

      write_ue(sink, static_cast<uint32_t>(mode));
      if (mode != BMode::bwd) {
        const MotionVector predicted = fwd_chain.predict(bx, by);
        write_se(sink, to_fwd.dx - predicted.dx);
        write_se(sink, to_fwd.dy - predicted.dy);
        fwd_chain.set(bx, by, to_fwd);
      }
      if (mode != BMode::fwd) {
        const MotionVector predicted = bwd_chain.predict(bx, by);
        write_se(sink, to_bwd.dx - predicted.dx);
        write_se(sink, to_bwd.dy - predicted.dy);
        bwd_chain.set(bx, by, to_bwd);
      }
      out.cu_bits.push_back(sink.bit_count() - bits_before);
    }
  }

  const uint64_t before_pad = sink.bit_count();
  sink.byte_align();
  if (!out.cu_bits.empty()) out.cu_bits.back() += sink.bit_count() - before_pad;

  out.unit.frame_type = FrameType::B;
  out.unit.poc = poc;
  out.unit.fwd_ref_poc = fwd_ref.poc;
  out.unit.bwd_ref_poc = bwd_ref.poc;
  out.unit.payload = sink.take();
  return out;
}

uint64_t estimate_bframe_bits(const Frame& fwd_ref, const Frame& bwd_ref,
                              const BFrameMotion& motion, uint32_t poc,
                              const BFrameConfig& cfg) {
  const BFrameUnitResult built =
      generate_bframe_unit(fwd_ref, bwd_ref, motion, poc, cfg);
  return static_cast<uint64_t>(built.unit.payload.size()) * 8;
}

}  // namespace evc
