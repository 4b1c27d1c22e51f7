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
#include "evc/pipeline.hpp"

#include <chrono>
#include <map>
#include <numeric>
#include <stdexcept>

#include "evc/counters.hpp"
#include "evc/keyframe_codec.hpp"
#include "evc/motion_estimation.hpp"

namespace evc {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - since)
      .count();
}

void reduce_timebase(uint64_t num, uint64_t den, StreamHeader& header) {
  const uint64_t g = std::gcd(num, den);
  header.timebase_num = static_cast<uint32_t>(num / (g ? g : 1));
  header.timebase_den = static_cast<uint32_t>(den / (g ? g : 1));
}

nlohmann::json config_to_json(const EncodeConfig& cfg) {
  return {
      {"interp_factor", cfg.interp_factor},
      {"gop_length", cfg.gop_length},
      {"base_qp", cfg.base_qp},
      {"rc", cfg.rc_mode == RateControlMode::coupled ? "coupled" : "constant_qp"},
      {"target_bits_per_gop", cfg.target_bits_per_gop},
      {"search_range", cfg.search_range},
      {"keyframe_period_us", cfg.keyframe_period_us},
      {"t_occ", cfg.t_occ},
      {"n_min", cfg.n_min},
      {"alpha", cfg.linear_alpha ? "linear" : "event"},
  };
}

// Per-frame bit/type rows straight from the container, display order.
std::vector<FrameMetric> unit_metrics(const Bitstream& bs) {
  std::vector<FrameMetric> rows;
  rows.reserve(bs.units.size());
  for (const EncodedFrameUnit& unit : bs.units) {
    FrameMetric row;
    row.poc = unit.poc;
    row.type = unit.frame_type;
    row.bits = static_cast<uint64_t>(unit.payload.size()) * 8;
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(),
            [](const FrameMetric& a, const FrameMetric& b) { return a.poc < b.poc; });
  return rows;
}

}  // namespace

EncodeOutput run_encode(const std::vector<Frame>& keyframes,
                        const EventStream& events, const EncodeConfig& cfg) {
  if (keyframes.size() < 2)
    throw std::invalid_argument("need at least two keyframes");
  for (const Frame& f : keyframes)
    if (!f.same_geometry(keyframes.front()))
      throw std::invalid_argument("geometry mismatch");

  const uint32_t true_w = keyframes.front().width;
  const uint32_t true_h = keyframes.front().height;
  if (!cfg.linear_alpha && !events.events.empty() &&
      (events.width != true_w || events.height != true_h))
    throw std::invalid_argument("geometry mismatch");

  const uint32_t step = cfg.interp_factor + 1;
  const uint32_t n_keys = static_cast<uint32_t>(keyframes.size());

  std::vector<Frame> src;
  src.reserve(n_keys);
  for (uint32_t k = 0; k < n_keys; ++k) {
    Frame padded = pad_to_multiple(keyframes[k]);
    padded.poc = k * step;
    padded.timestamp_us = static_cast<uint64_t>(k) * cfg.keyframe_period_us;
    src.push_back(std::move(padded));
  }

  EncodeOutput out;
  out.schedule = build_gop_schedule(n_keys, cfg.interp_factor,
                                    cfg.keyframe_period_us, cfg.gop_length);

  RateControlConfig rc;
  rc.target_bits_per_gop = cfg.target_bits_per_gop;
  rc.base_qp = cfg.base_qp;
  rc.mode = cfg.rc_mode;
  const uint32_t frames_per_gop = cfg.gop_length * step;
  const BFrameConfig bcfg{cfg.t_occ};
  const EventStream no_events{static_cast<uint16_t>(true_w),
                              static_cast<uint16_t>(true_h),
                              {}};

  const uint64_t warps_at_entry = op_counters().mc_block_warps;
  FrameBuffer buf;
  std::vector<EncodedFrameUnit> key_units;
  std::vector<EncodedFrameUnit> b_units;
  key_units.reserve(n_keys);

  for (uint32_t k = 0; k < n_keys; ++k) {
    if (k > 0) {
      // The interval's B units are generated (and their bits banked) before
      // the closing keyframe is coded, in display order, so the keyframe's
      // qp decision sees everything that precedes it.
      const Frame& a = src[k - 1];
      const Frame& b = src[k];
      const MotionField flow = block_match_keyframes(a, b, cfg.search_range);
      const EventActivation act = build_activation(
          cfg.linear_alpha ? no_events : events, a.timestamp_us,
          b.timestamp_us, flow.blocks_x, flow.blocks_y, cfg.n_min);
      for (uint32_t j = 1; j <= cfg.interp_factor; ++j) {
        const uint32_t poc = (k - 1) * step + j;
        const FrameSlot& slot = out.schedule.slots[poc];
        const BFrameMotion motion =
            distribute_motion(flow, act, slot.timestamp_us, poc);
        BFrameUnitResult bres = generate_bframe_unit(a, b, motion, poc, bcfg);
        record_bits(out.ledger, FrameType::B, bres.cu_bits);
        b_units.push_back(bres.unit);
        out.b_details.push_back(std::move(bres));
      }
    }
    const FrameType type =
        (k % cfg.gop_length == 0) ? FrameType::I : FrameType::P;
    const uint32_t index_in_gop = (k % cfg.gop_length) * step;
    KeyframeResult key =
        encode_keyframe(src[k], buf, out.ledger, rc, type, index_in_gop,
                        frames_per_gop, cfg.search_range);
    key_units.push_back(std::move(key.unit));
    out.keyframe_recons.push_back(std::move(key.recon));
  }
  finalize_ledger(out.ledger);

  if (op_counters().mc_block_warps != warps_at_entry)
    throw std::logic_error("intermediate frame materialized during encode");

  StreamHeader header;
  header.width = static_cast<uint16_t>(true_w);
  header.height = static_cast<uint16_t>(true_h);
  header.interp_factor = static_cast<uint8_t>(cfg.interp_factor);
  header.gop_length = static_cast<uint8_t>(cfg.gop_length);
  header.base_qp = static_cast<uint8_t>(cfg.base_qp);
  reduce_timebase(cfg.keyframe_period_us, 1000000ull * step, header);
  out.stream = synthesize_stream(header, key_units, b_units, out.schedule);

  out.report.frames = unit_metrics(out.stream);
  for (FrameMetric& row : out.report.frames) {
    if (row.type == FrameType::B) continue;
    const uint32_t k = row.poc / step;
    const Frame cropped = crop_frame(out.keyframe_recons[k], true_w, true_h);
    row.psnr_db = psnr(cropped, keyframes[k]);
  }
  out.report.gops = summarize_ledger(out.ledger);
  out.report.counters = op_counters();
  out.report.payload_bits = payload_bytes(out.stream) * 8;
  out.report.container_bits = container_header_bytes(out.stream) * 8;
  out.report.ledger_bits = out.ledger.total_bits();
  out.report.config_echo = config_to_json(cfg);
  return out;
}

std::vector<Frame> run_decode(const Bitstream& bs) { return decode_stream(bs); }

MetricsReport run_metrics(const Bitstream& bs,
                          const std::vector<Frame>& reference,
                          nlohmann::json config_echo) {
  const std::vector<Frame> decoded = decode_stream(bs);

  MetricsReport report;
  report.frames = unit_metrics(bs);
  for (size_t i = 0; i < decoded.size(); ++i) {
    const uint32_t poc = decoded[i].poc;
    if (poc < reference.size())
      report.frames[i].psnr_db = psnr(decoded[i], reference[poc]);
  }
  report.gops = summarize_stream(bs);
  report.counters = op_counters();
  report.payload_bits = payload_bytes(bs) * 8;
  report.container_bits = container_header_bytes(bs) * 8;
  report.ledger_bits = report.payload_bits;
  report.config_echo = std::move(config_echo);
  return report;
}

CompareOutput run_compare(const std::vector<Frame>& full_frames,
                          const EventStream& events, const EncodeConfig& cfg_in) {
  EncodeConfig cfg = cfg_in;
  cfg.rc_mode = RateControlMode::constant_qp;  // matched qp on both sides

  const uint32_t step = cfg.interp_factor + 1;
  if (full_frames.size() < step + 1)
    throw std::invalid_argument("need at least two keyframes");
  // Trim so the sequence ends on a keyframe.
  const size_t usable = (full_frames.size() - 1) / step * step + 1;
  const std::vector<Frame> truth(full_frames.begin(),
                                 full_frames.begin() + usable);
  const uint32_t true_w = truth.front().width;
  const uint32_t true_h = truth.front().height;
  const uint64_t display_period_us = cfg.keyframe_period_us / step;

  std::vector<Frame> keyframes;
  for (size_t i = 0; i < truth.size(); i += step) keyframes.push_back(truth[i]);

  CompareOutput out;

  // --- coupled: the event-guided encoder ---
  const OpCounters coupled_before = op_counters();
  const auto coupled_started = std::chrono::steady_clock::now();
  EncodeOutput coupled = run_encode(keyframes, events, cfg);
  out.coupled.wall_ms = elapsed_ms(coupled_started);
  const OpCounters coupled_after = op_counters();
  out.coupled.sad_evals = coupled_after.sad_evals - coupled_before.sad_evals;
  out.coupled.dct_calls = coupled_after.dct_calls - coupled_before.dct_calls;
  out.coupled.quant_calls =
      coupled_after.quant_calls - coupled_before.quant_calls;
  out.coupled.file_bits = write_bitstream(coupled.stream).size() * 8;

  {
    const std::vector<Frame> decoded = decode_stream(coupled.stream);
    double sum = 0.0, b_sum = 0.0;
    size_t b_n = 0;
    for (size_t i = 0; i < decoded.size(); ++i) {
      const double db = psnr(decoded[i], truth[decoded[i].poc]);
      sum += db;
      if (decoded[i].poc % step != 0) {
        b_sum += db;
        ++b_n;
      }
    }
    out.coupled.mean_psnr = sum / static_cast<double>(decoded.size());
    out.coupled.mean_b_psnr = b_n ? b_sum / static_cast<double>(b_n) : 0.0;
  }

  // --- naive: materialize every intermediate frame with the same motion
  // model, then encode the whole sequence as I/P with residuals ---
  const OpCounters naive_before = op_counters();
  const auto naive_started = std::chrono::steady_clock::now();

  std::vector<Frame> dense;
  dense.reserve(truth.size());
  {
    std::vector<Frame> src;
    for (size_t k = 0; k < keyframes.size(); ++k) {
      Frame padded = pad_to_multiple(keyframes[k]);
      padded.poc = static_cast<uint32_t>(k) * step;
      padded.timestamp_us = k * cfg.keyframe_period_us;
      src.push_back(std::move(padded));
    }
    const EventStream no_events{static_cast<uint16_t>(true_w),
                                static_cast<uint16_t>(true_h),
                                {}};
    const BFrameConfig bcfg{cfg.t_occ};
    for (size_t k = 0; k < keyframes.size(); ++k) {
      dense.push_back(truth[k * step]);  // keyframes pass through as source
      if (k + 1 == keyframes.size()) break;
      const Frame& a = src[k];
      const Frame& b = src[k + 1];
      const MotionField flow = block_match_keyframes(a, b, cfg.search_range);
      const EventActivation act = build_activation(
          cfg.linear_alpha ? no_events : events, a.timestamp_us,
          b.timestamp_us, flow.blocks_x, flow.blocks_y, cfg.n_min);
      for (uint32_t j = 1; j <= cfg.interp_factor; ++j) {
        const uint32_t poc = static_cast<uint32_t>(k) * step + j;
        const uint64_t tau =
            a.timestamp_us +
            (cfg.keyframe_period_us * j + step / 2) / step;
        const BFrameMotion motion = distribute_motion(flow, act, tau, poc);
        const BFrameUnitResult bres =
            generate_bframe_unit(a, b, motion, poc, bcfg);
        Frame rendered = decode_bframe(bres.unit, a, b);
        rendered = crop_frame(rendered, true_w, true_h);
        rendered.poc = poc;
        dense.push_back(std::move(rendered));
      }
    }
  }

  Bitstream naive_stream;
  {
    const uint32_t naive_gop = cfg.gop_length * step;
    RateControlConfig rc;
    rc.base_qp = cfg.base_qp;
    BitLedger ledger;
    FrameBuffer buf;
    std::vector<EncodedFrameUnit> units;
    for (size_t i = 0; i < dense.size(); ++i) {
      Frame padded = pad_to_multiple(dense[i]);
      padded.poc = static_cast<uint32_t>(i);
      padded.timestamp_us = i * display_period_us;
      const FrameType type =
          (i % naive_gop == 0) ? FrameType::I : FrameType::P;
      KeyframeResult key = encode_keyframe(
          padded, buf, ledger, rc, type, static_cast<uint32_t>(i % naive_gop),
          naive_gop, cfg.search_range);
      units.push_back(std::move(key.unit));
    }
    finalize_ledger(ledger);

    StreamHeader header;
    header.width = static_cast<uint16_t>(true_w);
    header.height = static_cast<uint16_t>(true_h);
    header.interp_factor = 0;
    header.gop_length = static_cast<uint8_t>(naive_gop);
    header.base_qp = static_cast<uint8_t>(cfg.base_qp);
    reduce_timebase(display_period_us, 1000000ull, header);
    const GopStructure naive_schedule = build_gop_schedule(
        static_cast<uint32_t>(dense.size()), 0, display_period_us, naive_gop);
    naive_stream = synthesize_stream(header, units, {}, naive_schedule);
  }

  out.naive.wall_ms = elapsed_ms(naive_started);
  const OpCounters naive_after = op_counters();
  out.naive.sad_evals = naive_after.sad_evals - naive_before.sad_evals;
  out.naive.dct_calls = naive_after.dct_calls - naive_before.dct_calls;
  out.naive.quant_calls = naive_after.quant_calls - naive_before.quant_calls;
  out.naive.file_bits = write_bitstream(naive_stream).size() * 8;

  {
    const std::vector<Frame> decoded = decode_stream(naive_stream);
    double sum = 0.0, b_sum = 0.0;
    size_t b_n = 0;
    for (size_t i = 0; i < decoded.size(); ++i) {
      const double db = psnr(decoded[i], truth[decoded[i].poc]);
      sum += db;
      if (decoded[i].poc % step != 0) {
        b_sum += db;
        ++b_n;
      }
    }
    out.naive.mean_psnr = sum / static_cast<double>(decoded.size());
    out.naive.mean_b_psnr = b_n ? b_sum / static_cast<double>(b_n) : 0.0;
  }

  const auto stats_to_json = [](const PipelineStats& s) -> nlohmann::json {
    return {{"total_bits", s.file_bits},
            {"sad_evals", s.sad_evals},
            {"dct_calls", s.dct_calls},
            {"quant_calls", s.quant_calls},
            {"op_total", s.op_total()},
            {"wall_ms", s.wall_ms},
            {"psnr_mean", s.mean_psnr},
            {"psnr_interpolated_mean", s.mean_b_psnr}};
  };
  out.json = {{"config", config_to_json(cfg)},
              {"frames", truth.size()},
              {"coupled", stats_to_json(out.coupled)},
              {"naive", stats_to_json(out.naive)}};
  return out;
}

}  // namespace evc
