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
#include "evc/rate_control.hpp"

#include <algorithm>
#include <stdexcept>

namespace evc {

uint64_t BitLedger::total_bits() const {
  uint64_t total = bc_acc_key + bc_acc_inter;
  for (const GopTotals& gop : history) total += gop.key_bits + gop.inter_bits;
  return total;
}

static void close_gop(BitLedger& ledger) {
  if (!ledger.gop_open) return;
  BitLedger::GopTotals totals;
  totals.key_bits = ledger.bc_acc_key;
  totals.inter_bits = ledger.bc_acc_inter;
  totals.keyframe_qps = std::move(ledger.open_qps);
  ledger.history.push_back(std::move(totals));
  ledger.open_qps.clear();
  ledger.bc_acc_key = 0;
  ledger.bc_acc_inter = 0;
  ledger.gop_open = false;
}

void record_bits(BitLedger& ledger, FrameType frame_type,
                 const std::vector<uint64_t>& cu_bits_sequence) {
  if (frame_type == FrameType::I) close_gop(ledger);

  uint64_t frame_bits = 0;
  for (uint64_t bits : cu_bits_sequence) {
    ledger.bc_current_cu = bits;
    frame_bits += bits;
  }
  if (frame_type == FrameType::B) {
    ledger.bc_acc_inter += frame_bits;
  } else {
    ledger.bc_acc_key += frame_bits;
  }
  ledger.gop_open = true;
}

void record_keyframe_qp(BitLedger& ledger, int qp) {
  ledger.open_qps.push_back(qp);
  ledger.gop_open = true;
}

void finalize_ledger(BitLedger& ledger) { close_gop(ledger); }

QuantParam next_keyframe_qp(const BitLedger& ledger,
                            const RateControlConfig& cfg,
                            uint32_t frame_index_in_gop,
                            uint32_t frames_in_gop) {
  if (cfg.mode == RateControlMode::constant_qp) {
    return QuantParam{cfg.base_qp};
  }
  if (cfg.target_bits_per_gop == 0) {
    throw std::invalid_argument("invalid rate target");
  }
  const double target = static_cast<double>(cfg.target_bits_per_gop);
  const double ideal =
      target * frame_index_in_gop / std::max<uint32_t>(frames_in_gop, 1);
  // The accumulators still hold the previous GOP when an opening I frame is
  // being decided (they reset when its bits are recorded); that frame starts
  // from a clean slate.
  const double accumulated =
      frame_index_in_gop == 0
          ? 0.0
          : static_cast<double>(ledger.bc_acc_key + ledger.bc_acc_inter);
  const double e = (accumulated - ideal) / target;
  const int qp = cfg.base_qp + static_cast<int>(round_half_away(cfg.k_p * e));
  return QuantParam{std::clamp(qp, cfg.qp_min, cfg.qp_max)};
}

}  // namespace evc
