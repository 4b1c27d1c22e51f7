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
#ifndef EVC_RATE_CONTROL_HPP
#define EVC_RATE_CONTROL_HPP

#include <cstdint>
#include <vector>

#include "evc/gop.hpp"
#include "evc/transform.hpp"

namespace evc {

// Bit accounting per CU and per GOP. Keyframe bits and intermediate-frame
// bits are tracked separately; both feed the keyframe qp decision.
struct BitLedger {
  uint64_t bc_current_cu = 0;  // bits of the most recently coded CU
  uint64_t bc_acc_key = 0;     // keyframe bits inside the current GOP
  uint64_t bc_acc_inter = 0;   // intermediate bits inside the current GOP

  struct GopTotals {
    uint64_t key_bits = 0;
    uint64_t inter_bits = 0;
    std::vector<int> keyframe_qps;
  };
  std::vector<GopTotals> history;  // closed GOPs, oldest first

  bool gop_open = false;
  std::vector<int> open_qps;  // keyframe qps of the GOP in progress

  uint64_t total_bits() const;
};

enum class RateControlMode { constant_qp, coupled };

struct RateControlConfig {
  uint64_t target_bits_per_gop = 0;  // coupled mode only
  int base_qp = 28;
  double k_p = 6.0;  // proportional gain on normalized budget error
  int qp_min = 4;
  int qp_max = 48;
  RateControlMode mode = RateControlMode::constant_qp;
};

// Per-CU bit counts accumulate into the I/P or B bucket; an I frame closes
// the previous GOP and opens a new one before its own bits are recorded.
void record_bits(BitLedger& ledger, FrameType frame_type,
                 const std::vector<uint64_t>& cu_bits_sequence);

// Records the qp chosen for a keyframe into the open GOP's summary.
void record_keyframe_qp(BitLedger& ledger, int qp);

// Pushes the still-open GOP into history at end of stream.
void finalize_ledger(BitLedger& ledger);

// constant_qp returns base_qp. coupled compares accumulated GOP bits with
// the pro-rated budget and steps qp proportionally:
//   ideal = target * frame_index_in_gop / frames_in_gop
//   e     = (bc_acc_key + bc_acc_inter - ideal) / target
//   qp    = clamp(base_qp + round(k_p * e), qp_min, qp_max)
QuantParam next_keyframe_qp(const BitLedger& ledger,
                            const RateControlConfig& cfg,
                            uint32_t frame_index_in_gop,
                            uint32_t frames_in_gop);

}  // namespace evc

#endif
