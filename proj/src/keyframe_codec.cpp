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
#include "evc/keyframe_codec.hpp"

#include <cstdlib>
#include <stdexcept>

#include "evc/bitio.hpp"
#include "evc/counters.hpp"

namespace evc {

namespace {

constexpr uint32_t kCtu = BlockGrid::kCtuSize;
constexpr uint32_t kTu = BlockGrid::kTuSize;

Tile16 copy_source_tile(const Frame& frame, uint32_t bx, uint32_t by) {
  Tile16 tile;
  const uint32_t x0 = bx * kCtu, y0 = by * kCtu;
  for (uint32_t r = 0; r < kCtu; ++r) {
    const uint8_t* row = &frame.samples[(y0 + r) * frame.width + x0];
    std::copy(row, row + kCtu, tile.begin() + r * kCtu);
  }
  return tile;
}

}  // namespace

Tile16 intra_predict(const Frame& recon, uint32_t bx, uint32_t by, CuMode mode) {
  const uint32_t x0 = bx * kCtu, y0 = by * kCtu;
  const bool has_top = y0 > 0;
  const bool has_left = x0 > 0;
  Tile16 tile;

  switch (mode) {
    case CuMode::intra_dc: {
      uint32_t sum = 0, n = 0;
      if (has_top) {
        for (uint32_t c = 0; c < kCtu; ++c) sum += recon.at(x0 + c, y0 - 1);
        n += kCtu;
      }
      if (has_left) {
        for (uint32_t r = 0; r < kCtu; ++r) sum += recon.at(x0 - 1, y0 + r);
        n += kCtu;
      }
      const uint8_t dc =
          n == 0 ? 128 : static_cast<uint8_t>((sum + n / 2) / n);
      tile.fill(dc);
      break;
    }
    case CuMode::intra_h:
      for (uint32_t r = 0; r < kCtu; ++r) {
        const uint8_t v = has_left ? recon.at(x0 - 1, y0 + r) : 128;
        std::fill_n(tile.begin() + r * kCtu, kCtu, v);
      }
      break;
    case CuMode::intra_v:
      for (uint32_t c = 0; c < kCtu; ++c) {
        const uint8_t v = has_top ? recon.at(x0 + c, y0 - 1) : 128;
        for (uint32_t r = 0; r < kCtu; ++r) tile[r * kCtu + c] = v;
      }
      break;
    default:
      throw std::invalid_argument("invalid intra mode");
  }
  return tile;
}

Tile16 inter_predict_tile(const Frame& ref, uint32_t bx, uint32_t by,
                          MotionVector mv) {
  Tile16 tile;
  const int64_t sx = static_cast<int64_t>(bx) * kCtu + mv.dx;
  const int64_t sy = static_cast<int64_t>(by) * kCtu + mv.dy;
  for (uint32_t r = 0; r < kCtu; ++r)
    for (uint32_t c = 0; c < kCtu; ++c)
      tile[r * kCtu + c] = sample_clamped(ref, sx + c, sy + r);
  return tile;
}

uint64_t tile_sad(const Tile16& a, const Tile16& b) {
  uint64_t sad = 0;
  for (size_t i = 0; i < a.size(); ++i)
    sad += static_cast<uint64_t>(std::abs(int(a[i]) - int(b[i])));
  return sad;
}

uint64_t block_sad(const Frame& cur, const Frame& ref, uint32_t bx, uint32_t by,
                   MotionVector mv) {
  op_counters().sad_evals += 1;
  const uint32_t cx = bx * kCtu, cy = by * kCtu;
  const int64_t sx = static_cast<int64_t>(cx) + mv.dx;
  const int64_t sy = static_cast<int64_t>(cy) + mv.dy;
  uint64_t sad = 0;
  if (sx >= 0 && sy >= 0 && sx + kCtu <= ref.width && sy + kCtu <= ref.height) {
    for (uint32_t r = 0; r < kCtu; ++r) {
      const uint8_t* a = &cur.samples[(cy + r) * cur.width + cx];
      const uint8_t* b =
          &ref.samples[static_cast<size_t>(sy + r) * ref.width + sx];
      for (uint32_t c = 0; c < kCtu; ++c)
        sad += static_cast<uint64_t>(std::abs(int(a[c]) - int(b[c])));
    }
  } else {
    for (uint32_t r = 0; r < kCtu; ++r)
      for (uint32_t c = 0; c < kCtu; ++c)
        sad += static_cast<uint64_t>(std::abs(
            int(cur.at(cx + c, cy + r)) - int(sample_clamped(ref, sx + c, sy + r))));
  }
  return sad;
}

SearchResult motion_search_p(const Frame& cur, const Frame& ref, uint32_t bx,
                             uint32_t by, int range) {
  SearchResult best;
  bool have_best = false;
  for (int dy = -range; dy <= range; ++dy) {
    for (int dx = -range; dx <= range; ++dx) {
      const MotionVector mv{dx, dy};
      const uint64_t sad = block_sad(cur, ref, bx, by, mv);
      if (!have_best) {
        best = {mv, sad};
        have_best = true;
        continue;
      }
      if (sad > best.sad) continue;
      if (sad < best.sad) {
        best = {mv, sad};
        continue;
      }
      // Equal SAD: prefer the shorter vector, then top-most, then left-most.
      const int cand_len = std::abs(dx) + std::abs(dy);
      const int best_len = std::abs(best.mv.dx) + std::abs(best.mv.dy);
      if (cand_len < best_len ||
          (cand_len == best_len &&
           (dy < best.mv.dy || (dy == best.mv.dy && dx < best.mv.dx)))) {
        best = {mv, sad};
      }
    }
  }
  return best;
}

void reconstruct_cu(Frame& recon, uint32_t bx, uint32_t by, const Tile16& pred,
                    const std::array<CoeffBlock, 4>& tus, QuantParam qp) {
  const uint32_t x0 = bx * kCtu, y0 = by * kCtu;
  for (uint32_t t = 0; t < 4; ++t) {
    const uint32_t tx = (t % 2) * kTu, ty = (t / 2) * kTu;
    const RealBlock residual = idct8x8(dequantize(tus[t], qp));
    for (uint32_t r = 0; r < kTu; ++r) {
      for (uint32_t c = 0; c < kTu; ++c) {
        const double value =
            pred[(ty + r) * kCtu + tx + c] + residual[r * kTu + c];
        const int64_t rounded = round_half_away(value);
        recon.at(x0 + tx + c, y0 + ty + r) =
            static_cast<uint8_t>(std::clamp<int64_t>(rounded, 0, 255));
      }
    }
  }
}

KeyframeResult encode_keyframe(const Frame& cur, FrameBuffer& buf,
                               BitLedger& ledger, const RateControlConfig& rc,
                               FrameType frame_type, uint32_t frame_index_in_gop,
                               uint32_t frames_in_gop, int search_range) {
  if (frame_type == FrameType::B)
    throw std::invalid_argument("keyframe encoder got a B slot");
  if (cur.width % kCtu != 0 || cur.height % kCtu != 0)
    throw std::invalid_argument("frame not padded to block size");
  if (frame_type == FrameType::P && !buf.valid)
    throw std::runtime_error("missing reference frame");

  const QuantParam qp =
      next_keyframe_qp(ledger, rc, frame_index_in_gop, frames_in_gop);

  const uint32_t blocks_x = cur.width / kCtu;
  const uint32_t blocks_y = cur.height / kCtu;
  Frame recon = make_frame(cur.width, cur.height);
  recon.poc = cur.poc;
  recon.timestamp_us = cur.timestamp_us;

  MvChain inter_chain(blocks_x, blocks_y);
  BitSink sink;
  std::vector<uint64_t> cu_bits;
  cu_bits.reserve(static_cast<size_t>(blocks_x) * blocks_y);

  for (uint32_t by = 0; by < blocks_y; ++by) {
    for (uint32_t bx = 0; bx < blocks_x; ++bx) {
      const uint64_t bits_before = sink.bit_count();
      const Tile16 src = copy_source_tile(cur, bx, by);

      CuMode best_mode = CuMode::intra_dc;
      Tile16 best_pred = intra_predict(recon, bx, by, CuMode::intra_dc);
      uint64_t best_cost = tile_sad(src, best_pred);
      for (CuMode m : {CuMode::intra_h, CuMode::intra_v}) {
        Tile16 pred = intra_predict(recon, bx, by, m);
        const uint64_t cost = tile_sad(src, pred);
        if (cost < best_cost) {
          best_cost = cost;
          best_mode = m;
          best_pred = pred;
        }
      }

      MotionVector mv{};
      if (frame_type == FrameType::P) {
        const SearchResult found =
            motion_search_p(cur, buf.frame, bx, by, search_range);
        if (found.sad <= best_cost) {  // ties go to inter
          best_mode = CuMode::inter;
          mv = found.mv;
          best_pred = inter_predict_tile(buf.frame, bx, by, mv);
        }
      }

      write_ue(sink, static_cast<uint32_t>(best_mode));
      if (best_mode == CuMode::inter) {
        const MotionVector predicted = inter_chain.predict(bx, by);
        write_se(sink, mv.dx - predicted.dx);
        write_se(sink, mv.dy - predicted.dy);
        inter_chain.set(bx, by, mv);
      }

      std::array<CoeffBlock, 4> tus;
      for (uint32_t t = 0; t < 4; ++t) {
        const uint32_t tx = (t % 2) * kTu, ty = (t / 2) * kTu;
        ResidualBlock residual;
        for (uint32_t r = 0; r < kTu; ++r)
          for (uint32_t c = 0; c < kTu; ++c)
            residual[r * kTu + c] = int(src[(ty + r) * kCtu + tx + c]) -
                                    int(best_pred[(ty + r) * kCtu + tx + c]);
        tus[t] = quantize(dct8x8(residual), qp);
        write_coeffs(sink, zigzag(tus[t]));
      }
      reconstruct_cu(recon, bx, by, best_pred, tus, qp);

      cu_bits.push_back(sink.bit_count() - bits_before);
    }
  }

  // Alignment padding is billed to the last CU so the per-CU bits sum to the
  // payload size exactly.
  const uint64_t before_pad = sink.bit_count();
  sink.byte_align();
  if (!cu_bits.empty()) cu_bits.back() += sink.bit_count() - before_pad;

  record_bits(ledger, frame_type, cu_bits);
  record_keyframe_qp(ledger, qp.qp);

  KeyframeResult out;
  out.unit.frame_type = frame_type;
  out.unit.poc = cur.poc;
  out.unit.qp = qp.qp;
  out.unit.payload = sink.take();
  out.recon = std::move(recon);
  out.qp = qp.qp;
  out.cu_bits = std::move(cu_bits);

  buf.frame = out.recon;
  buf.valid = true;
  return out;
}

}  // namespace evc
