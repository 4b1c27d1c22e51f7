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
#ifndef EVC_PIPELINE_HPP
#define EVC_PIPELINE_HPP

#include <cstdint>
#include <vector>

#include "evc/bframe.hpp"
#include "evc/events.hpp"
#include "evc/frame.hpp"
#include "evc/metrics.hpp"
#include "evc/rate_control.hpp"
#include "evc/stream.hpp"

namespace evc {

struct EncodeConfig {
  uint32_t interp_factor = 3;  // B frames between consecutive keyframes
  uint32_t gop_length = 4;     // keyframes per GOP
  int base_qp = 28;
  RateControlMode rc_mode = RateControlMode::constant_qp;
  uint64_t target_bits_per_gop = 0;  // coupled mode only
  int search_range = 24;
  uint64_t keyframe_period_us = 40000;
  uint64_t t_occ = 8 * BlockGrid::kCtuSize * BlockGrid::kCtuSize;
  uint32_t n_min = 8;
  // Ignore the event stream and time every block linearly — the ablation
  // baseline for the event-guided split.
  bool linear_alpha = false;
};

struct EncodeOutput {
  Bitstream stream;
  BitLedger ledger;
  GopStructure schedule;
  std::vector<Frame> keyframe_recons;      // padded, one per keyframe
  std::vector<BFrameUnitResult> b_details; // B slots in display order
  MetricsReport report;
};

// Full encode: schedule, keyframe loop with rate control, per-interval
// motion estimation, event-guided B units, container synthesis. Intermediate
// frames are never rendered — a nonzero mc_block_warps delta aborts.
// The inputs are the low-rate keyframes only; `events` covers the gaps.
EncodeOutput run_encode(const std::vector<Frame>& keyframes,
                        const EventStream& events, const EncodeConfig& cfg);

std::vector<Frame> run_decode(const Bitstream& bs);

// Decodes and scores a stream against the full-rate reference sequence
// (indexed by poc). Reference may be shorter; unmatched frames carry no
// psnr. GOP summaries are rebuilt from the container.
MetricsReport run_metrics(const Bitstream& bs,
                          const std::vector<Frame>& reference,
                          nlohmann::json config_echo);

struct PipelineStats {
  uint64_t file_bits = 0;
  uint64_t sad_evals = 0;
  uint64_t dct_calls = 0;
  uint64_t quant_calls = 0;
  double wall_ms = 0.0;
  double mean_psnr = 0.0;
  double mean_b_psnr = 0.0;  // over interpolated slots only

  uint64_t op_total() const { return sad_evals + dct_calls + quant_calls; }
};

struct CompareOutput {
  PipelineStats coupled;
  PipelineStats naive;
  nlohmann::json json;
};

// Head-to-head on the same ground truth at matched constant qp:
//   naive   — materialize every intermediate frame with the same motion
//             model, then encode the full-rate sequence as I/P with
//             residuals;
//   coupled — keyframes plus motion-only B units.
// Ground truth is the full-rate sequence; keyframes are taken every
// interp_factor+1 frames.
CompareOutput run_compare(const std::vector<Frame>& full_frames,
                          const EventStream& events, const EncodeConfig& cfg);

}  // namespace evc

#endif
