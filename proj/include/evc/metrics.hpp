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
#ifndef EVC_METRICS_HPP
#define EVC_METRICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "evc/counters.hpp"
#include "evc/frame.hpp"
#include "evc/gop.hpp"
#include "evc/rate_control.hpp"
#include "evc/stream.hpp"

namespace evc {

// 10*log10(255^2 / MSE), capped at 99.0 dB; identical frames report the
// cap. Throws "geometry mismatch" on differing dimensions.
double psnr(const Frame& a, const Frame& b);

struct FrameMetric {
  uint32_t poc = 0;
  FrameType type = FrameType::I;
  uint64_t bits = 0;  // payload bits of the frame's unit
  std::optional<double> psnr_db;  // absent when no reference frame exists
};

struct GopSummary {
  uint64_t key_bits = 0;
  uint64_t inter_bits = 0;
  std::vector<int> keyframe_qps;
};

struct MetricsReport {
  std::vector<FrameMetric> frames;  // display order
  std::vector<GopSummary> gops;
  OpCounters counters;
  uint64_t payload_bits = 0;
  uint64_t container_bits = 0;  // magic, headers, sizes
  uint64_t ledger_bits = 0;     // per-GOP totals; equals payload_bits
  nlohmann::json config_echo;

  std::optional<double> mean_psnr(std::optional<FrameType> type = {}) const;
};

std::vector<GopSummary> summarize_ledger(const BitLedger& ledger);

// Rebuilds the per-GOP summary from a parsed stream: every I unit opens a
// GOP. Lets `metrics` reconcile a file with no encoder state at hand.
std::vector<GopSummary> summarize_stream(const Bitstream& bs);

nlohmann::json report_to_json(const MetricsReport& report);
void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace evc

#endif
