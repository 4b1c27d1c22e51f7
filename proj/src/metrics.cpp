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
#include "evc/metrics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace evc {

namespace {
constexpr double kPsnrCap = 99.0;
}

double psnr(const Frame& a, const Frame& b) {
  if (!a.same_geometry(b)) throw std::invalid_argument("geometry mismatch");
  uint64_t sse = 0;
  for (size_t i = 0; i < a.samples.size(); ++i) {
    const int64_t d = int64_t(a.samples[i]) - int64_t(b.samples[i]);
    sse += static_cast<uint64_t>(d * d);
  }
  if (sse == 0) return kPsnrCap;
  const double mse = static_cast<double>(sse) / static_cast<double>(a.samples.size());
  return std::min(kPsnrCap, 10.0 * std::log10(255.0 * 255.0 / mse));
}

std::optional<double> MetricsReport::mean_psnr(
    std::optional<FrameType> type) const {
  double sum = 0.0;
  size_t n = 0;
  for (const FrameMetric& fm : frames) {
    if (!fm.psnr_db) continue;
    if (type && fm.type != *type) continue;
    sum += *fm.psnr_db;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::vector<GopSummary> summarize_ledger(const BitLedger& ledger) {
  std::vector<GopSummary> out;
  out.reserve(ledger.history.size());
  for (const BitLedger::GopTotals& gop : ledger.history)
    out.push_back({gop.key_bits, gop.inter_bits, gop.keyframe_qps});
  return out;
}

std::vector<GopSummary> summarize_stream(const Bitstream& bs) {
  std::vector<GopSummary> out;
  for (const EncodedFrameUnit& unit : bs.units) {
    if (unit.frame_type == FrameType::I) out.emplace_back();
    if (out.empty()) throw std::runtime_error("corrupt header");  // no opening I
    GopSummary& gop = out.back();
    const uint64_t bits = static_cast<uint64_t>(unit.payload.size()) * 8;
    if (unit.frame_type == FrameType::B) {
      gop.inter_bits += bits;
    } else {
      gop.key_bits += bits;
      gop.keyframe_qps.push_back(unit.qp);
    }
  }
  return out;
}

nlohmann::json report_to_json(const MetricsReport& report) {
  nlohmann::json frames = nlohmann::json::array();
  for (const FrameMetric& fm : report.frames) {
    nlohmann::json row = {
        {"poc", fm.poc},
        {"type", frame_type_name(fm.type)},
        {"bits", fm.bits},
    };
    if (fm.psnr_db)
      row["psnr_db"] = *fm.psnr_db;
    else
      row["psnr_db"] = nullptr;
    frames.push_back(std::move(row));
  }

  nlohmann::json gops = nlohmann::json::array();
  for (const GopSummary& gop : report.gops) {
    gops.push_back({{"key_bits", gop.key_bits},
                    {"inter_bits", gop.inter_bits},
                    {"qp_per_keyframe", gop.keyframe_qps}});
  }

  nlohmann::json j = {
      {"frames", std::move(frames)},
      {"gops", std::move(gops)},
      {"counters",
       {{"sad_evals", report.counters.sad_evals},
        {"dct_calls", report.counters.dct_calls},
        {"idct_calls", report.counters.idct_calls},
        {"quant_calls", report.counters.quant_calls},
        {"dequant_calls", report.counters.dequant_calls},
        {"mc_block_warps", report.counters.mc_block_warps},
        {"mode_decision_warps", report.counters.mode_decision_warps}}},
      {"totals",
       {{"payload_bits", report.payload_bits},
        {"container_bits", report.container_bits},
        {"ledger_bits", report.ledger_bits},
        {"file_bits", report.payload_bits + report.container_bits}}},
      {"config", report.config_echo},
  };

  const auto mean_all = report.mean_psnr();
  j["psnr"] = {{"mean", mean_all ? nlohmann::json(*mean_all) : nullptr}};
  for (FrameType t : {FrameType::I, FrameType::P, FrameType::B}) {
    const auto mean = report.mean_psnr(t);
    j["psnr"][frame_type_name(t)] =
        mean ? nlohmann::json(*mean) : nlohmann::json(nullptr);
  }
  return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << j.dump(2) << "\n";
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace evc
