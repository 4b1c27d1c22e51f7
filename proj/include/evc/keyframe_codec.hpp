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
#ifndef EVC_KEYFRAME_CODEC_HPP
#define EVC_KEYFRAME_CODEC_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "evc/frame.hpp"
#include "evc/motion.hpp"
#include "evc/rate_control.hpp"
#include "evc/stream.hpp"
#include "evc/transform.hpp"

namespace evc {

// CU coding modes. Keyframes may use all four; an inter CU in an I-frame
// payload is a bitstream error.
enum class CuMode : uint32_t {
  intra_dc = 0,
  intra_h = 1,
  intra_v = 2,
  inter = 3,
};

// Single-slot reference picture store. Holds the reconstruction of the most
// recent keyframe — identical on the encode and decode sides by
// construction, which is what keeps P chains drift-free.
struct FrameBuffer {
  Frame frame;
  bool valid = false;
};

using Tile16 = std::array<uint8_t, BlockGrid::kCtuSize * BlockGrid::kCtuSize>;

// DC/H/V prediction from already-reconstructed neighbor samples of `recon`.
// Missing edges fall back to 128 (H/V) or drop out of the DC mean; a corner
// CU with no neighbors predicts flat 128.
Tile16 intra_predict(const Frame& recon, uint32_t bx, uint32_t by, CuMode mode);

// Motion-compensated 16x16 tile from `ref` at (bx*16+mv.dx, by*16+mv.dy),
// edge samples clamped.
Tile16 inter_predict_tile(const Frame& ref, uint32_t bx, uint32_t by,
                          MotionVector mv);

uint64_t tile_sad(const Tile16& a, const Tile16& b);

// SAD between the CU at (bx,by) in `cur` and the displaced window in `ref`.
// Counts one SAD evaluation.
uint64_t block_sad(const Frame& cur, const Frame& ref, uint32_t bx, uint32_t by,
                   MotionVector mv);

struct SearchResult {
  MotionVector mv;
  uint64_t sad = 0;
};

// Exhaustive integer-pel search over [-range, range]^2. Ties break on lower
// SAD, then smaller |dx|+|dy|, then smaller dy, then smaller dx; with the
// scan ordered that way the first strict improvement wins.
SearchResult motion_search_p(const Frame& cur, const Frame& ref, uint32_t bx,
                             uint32_t by, int range);

// Dequantizes and inverse-transforms the CU's four 8x8 coefficient blocks
// (TU raster order) and adds them onto `pred`, clamped to [0,255], writing
// the result into `recon`. Shared by the encoder's reconstruction loop and
// the decoder so both produce bit-identical pixels.
void reconstruct_cu(Frame& recon, uint32_t bx, uint32_t by, const Tile16& pred,
                    const std::array<CoeffBlock, 4>& tus, QuantParam qp);

struct KeyframeResult {
  EncodedFrameUnit unit;
  Frame recon;
  int qp = 0;
  std::vector<uint64_t> cu_bits;  // per CU in raster order, pad bits on last
};

// Encodes one keyframe (I or P) against `buf`, reconstructs it exactly as
// the decoder will, records per-CU bits with the ledger and leaves the
// reconstruction in `buf` for the next keyframe. P with an empty buffer
// throws "missing reference frame".
KeyframeResult encode_keyframe(const Frame& cur, FrameBuffer& buf,
                               BitLedger& ledger, const RateControlConfig& rc,
                               FrameType frame_type, uint32_t frame_index_in_gop,
                               uint32_t frames_in_gop, int search_range);

}  // namespace evc

#endif
