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
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "evc/counters.hpp"
#include "evc/event_sim.hpp"
#include "evc/metrics.hpp"
#include "evc/pgm.hpp"
#include "evc/pipeline.hpp"

namespace {

struct SimulateArgs {
  std::string frames_dir;
  std::string out_path;
  std::string keyframes_out;
  std::string report_path;
  double threshold = 0.15;
  double log_eps = 1.0;
  uint32_t decimation = 1;
  uint64_t frame_period_us = 10000;
};

struct EncodeArgs {
  std::string frames_dir;
  std::string events_path;
  std::string out_path;
  std::string report_path;
  std::string dump_motion_dir;
  evc::EncodeConfig cfg;
  uint64_t bitrate_bps = 0;
  std::string rc = "constant_qp";
  std::string alpha = "event";
};

struct DecodeArgs {
  std::string stream_path;
  std::string out_dir;
  std::string report_path;
};

struct MetricsArgs {
  std::string stream_path;
  std::string frames_dir;
  std::string report_path;
  uint64_t frame_period_us = 10000;
};

struct CompareArgs {
  std::string frames_dir;
  std::string events_path;
  std::string report_path;
  evc::EncodeConfig cfg;
  uint64_t frame_period_us = 10000;
  double threshold = 0.15;
  double log_eps = 1.0;
  std::string alpha = "event";
};

int run_simulate(const SimulateArgs& args) {
  const std::vector<evc::Frame> frames =
      evc::read_frame_dir(args.frames_dir, args.frame_period_us);
  evc::SimConfig cfg;
  cfg.contrast_threshold = args.threshold;
  cfg.log_eps = args.log_eps;
  cfg.decimation = args.decimation;
  const evc::EventStream events = evc::simulate_events(frames, cfg);
  evc::write_evt1(events, cfg.contrast_threshold, args.out_path);
  if (!args.keyframes_out.empty()) {
    std::filesystem::create_directories(args.keyframes_out);
    evc::write_frame_dir(evc::decimate_keyframes(frames, args.decimation),
                         args.keyframes_out);
  }
  std::printf("%zu frames -> %zu events -> %s\n", frames.size(),
              events.events.size(), args.out_path.c_str());
  if (!args.report_path.empty()) {
    const nlohmann::json report = {
        {"config",
         {{"frames", args.frames_dir},
          {"contrast_threshold", cfg.contrast_threshold},
          {"log_eps", cfg.log_eps},
          {"decimation", cfg.decimation},
          {"frame_period_us", args.frame_period_us}}},
        {"frames", frames.size()},
        {"events", events.events.size()},
    };
    evc::write_json(report, args.report_path);
  }
  return 0;
}

void dump_motion(const evc::EncodeOutput& out, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const evc::BFrameUnitResult& b : out.b_details) {
    const uint32_t blocks_x = b.unit.payload.empty()
                                  ? 0
                                  : out.keyframe_recons.front().width /
                                        evc::BlockGrid::kCtuSize;
    const uint32_t blocks_y = out.keyframe_recons.front().height /
                              evc::BlockGrid::kCtuSize;
    char name[32];
    std::snprintf(name, sizeof name, "motion_%06u.txt", b.unit.poc);
    std::FILE* f = std::fopen((dir + "/" + name).c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + dir + "/" + name);
    for (uint32_t by = 0; by < blocks_y; ++by) {
      for (uint32_t bx = 0; bx < blocks_x; ++bx) {
        const size_t i = static_cast<size_t>(by) * blocks_x + bx;
        if (b.modes[i] != evc::BMode::bwd)
          std::fprintf(f, "%u fwd %u %u %d %d\n", b.unit.poc, bx, by,
                       b.fwd_mvs[i].dx, b.fwd_mvs[i].dy);
        if (b.modes[i] != evc::BMode::fwd)
          std::fprintf(f, "%u bwd %u %u %d %d\n", b.unit.poc, bx, by,
                       b.bwd_mvs[i].dx, b.bwd_mvs[i].dy);
      }
    }
    std::fclose(f);
  }
}

int run_encode_cmd(EncodeArgs& args) {
  args.cfg.rc_mode = args.rc == "coupled" ? evc::RateControlMode::coupled
                                          : evc::RateControlMode::constant_qp;
  args.cfg.linear_alpha = args.alpha == "linear";

  const std::vector<evc::Frame> keyframes =
      evc::read_frame_dir(args.frames_dir, args.cfg.keyframe_period_us);
  if (keyframes.empty()) throw std::runtime_error("no frames");

  evc::EventStream events;
  if (!args.events_path.empty()) {
    events = evc::read_events(args.events_path,
                              static_cast<uint16_t>(keyframes.front().width),
                              static_cast<uint16_t>(keyframes.front().height));
  } else if (!args.cfg.linear_alpha) {
    throw std::runtime_error("encode needs --events unless --alpha linear");
  }

  if (args.bitrate_bps > 0) {
    // GOP duration = keyframes-per-GOP * keyframe period.
    args.cfg.target_bits_per_gop = args.bitrate_bps * args.cfg.gop_length *
                                   args.cfg.keyframe_period_us / 1000000;
  }

  evc::EncodeOutput out = evc::run_encode(keyframes, events, args.cfg);
  evc::write_bitstream_file(out.stream, args.out_path);

  const uint64_t file_bits = out.report.payload_bits + out.report.container_bits;
  std::printf("%zu keyframes + %zu interpolated -> %s (%" PRIu64 " bytes)\n",
              keyframes.size(), out.b_details.size(), args.out_path.c_str(),
              file_bits / 8);

  if (!args.dump_motion_dir.empty()) dump_motion(out, args.dump_motion_dir);
  if (!args.report_path.empty()) {
    out.report.config_echo["frames"] = args.frames_dir;
    out.report.config_echo["events"] = args.events_path;
    evc::write_json(evc::report_to_json(out.report), args.report_path);
  }
  return 0;
}

int run_decode_cmd(const DecodeArgs& args) {
  const evc::Bitstream bs = evc::parse_bitstream_file(args.stream_path);
  const std::vector<evc::Frame> frames = evc::run_decode(bs);
  std::filesystem::create_directories(args.out_dir);
  evc::write_frame_dir(frames, args.out_dir);
  std::printf("%zu frames -> %s\n", frames.size(), args.out_dir.c_str());
  if (!args.report_path.empty()) {
    evc::MetricsReport report = evc::run_metrics(
        bs, {}, {{"stream", args.stream_path}, {"out", args.out_dir}});
    evc::write_json(evc::report_to_json(report), args.report_path);
  }
  return 0;
}

int run_metrics_cmd(const MetricsArgs& args) {
  const evc::Bitstream bs = evc::parse_bitstream_file(args.stream_path);
  const std::vector<evc::Frame> reference =
      evc::read_frame_dir(args.frames_dir, args.frame_period_us);
  const evc::MetricsReport report = evc::run_metrics(
      bs, reference,
      {{"stream", args.stream_path}, {"frames", args.frames_dir}});
  const nlohmann::json j = evc::report_to_json(report);
  if (!args.report_path.empty())
    evc::write_json(j, args.report_path);
  else
    std::cout << j.dump(2) << "\n";
  const auto mean = report.mean_psnr();
  std::printf("frames %zu, payload %" PRIu64 " bits, mean psnr %s\n",
              report.frames.size(), report.payload_bits,
              mean ? std::to_string(*mean).c_str() : "n/a");
  return 0;
}

int run_compare_cmd(CompareArgs& args) {
  args.cfg.linear_alpha = args.alpha == "linear";
  args.cfg.keyframe_period_us =
      args.frame_period_us * (args.cfg.interp_factor + 1);

  const std::vector<evc::Frame> frames =
      evc::read_frame_dir(args.frames_dir, args.frame_period_us);
  if (frames.empty()) throw std::runtime_error("no frames");

  evc::EventStream events;
  if (!args.events_path.empty()) {
    events = evc::read_events(args.events_path,
                              static_cast<uint16_t>(frames.front().width),
                              static_cast<uint16_t>(frames.front().height));
  } else {
    evc::SimConfig sim;
    sim.contrast_threshold = args.threshold;
    sim.log_eps = args.log_eps;
    events = evc::simulate_events(frames, sim);
  }

  const evc::CompareOutput out = evc::run_compare(frames, events, args.cfg);
  std::printf("coupled: %" PRIu64 " bits, %" PRIu64 " ops, %.2f dB mean\n",
              out.coupled.file_bits, out.coupled.op_total(),
              out.coupled.mean_psnr);
  std::printf("naive:   %" PRIu64 " bits, %" PRIu64 " ops, %.2f dB mean\n",
              out.naive.file_bits, out.naive.op_total(), out.naive.mean_psnr);
  if (!args.report_path.empty()) {
    nlohmann::json j = out.json;
    j["config"]["frames"] = args.frames_dir;
    j["config"]["events"] = args.events_path;
    evc::write_json(j, args.report_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-coupled block video codec"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate-events", "simulate an event stream from full-rate frames");
  simulate->add_option("--frames", sim.frames_dir, "input PGM directory")
      ->required();
  simulate->add_option("--out", sim.out_path, "output event file")->required();
  simulate->add_option("--threshold", sim.threshold, "contrast threshold");
  simulate->add_option("--log-eps", sim.log_eps, "log intensity offset");
  simulate->add_option("--decimation", sim.decimation,
                       "keep every k-th frame as keyframe");
  simulate->add_option("--keyframes-out", sim.keyframes_out,
                       "write decimated keyframes here");
  simulate->add_option("--frame-period-us", sim.frame_period_us,
                       "input frame period");
  simulate->add_option("--report", sim.report_path, "write a JSON report");

  EncodeArgs enc;
  CLI::App* encode =
      app.add_subcommand("encode", "encode keyframes + events to a stream");
  encode->add_option("--frames", enc.frames_dir, "keyframe PGM directory")
      ->required();
  encode->add_option("--events", enc.events_path, "event file (EVT1 or CSV)");
  encode->add_option("--out", enc.out_path, "output stream")->required();
  encode->add_option("--interp", enc.cfg.interp_factor,
                     "interpolated frames per keyframe interval");
  encode->add_option("--gop", enc.cfg.gop_length, "keyframes per GOP");
  encode->add_option("--qp", enc.cfg.base_qp, "base quantization parameter");
  encode->add_option("--bitrate", enc.bitrate_bps, "target bits per second");
  encode->add_option("--rc", enc.rc, "rate control mode")
      ->check(CLI::IsMember({"constant_qp", "coupled"}));
  encode->add_option("--search-range", enc.cfg.search_range,
                     "motion search radius");
  encode->add_option("--keyframe-period-us", enc.cfg.keyframe_period_us,
                     "keyframe period");
  encode->add_option("--alpha", enc.alpha, "motion timing source")
      ->check(CLI::IsMember({"event", "linear"}));
  encode->add_option("--n-min", enc.cfg.n_min,
                     "events per block below which timing is linear");
  encode->add_option("--occlusion-sad", enc.cfg.t_occ,
                     "candidate disagreement threshold");
  encode->add_option("--report", enc.report_path, "write a JSON report");
  encode->add_option("--dump-motion", enc.dump_motion_dir,
                     "write per-frame motion text files");

  DecodeArgs dec;
  CLI::App* decode = app.add_subcommand("decode", "decode a stream to frames");
  decode->add_option("stream", dec.stream_path, "input stream")->required();
  decode->add_option("--out", dec.out_dir, "output PGM directory")->required();
  decode->add_option("--report", dec.report_path, "write a JSON report");

  MetricsArgs met;
  CLI::App* metrics =
      app.add_subcommand("metrics", "score a stream against reference frames");
  metrics->add_option("stream", met.stream_path, "input stream")->required();
  metrics->add_option("--frames", met.frames_dir, "full-rate reference frames")
      ->required();
  metrics->add_option("--frame-period-us", met.frame_period_us,
                      "reference frame period");
  metrics->add_option("--report", met.report_path, "write the JSON here");

  CompareArgs cmp;
  CLI::App* compare = app.add_subcommand(
      "compare", "coupled vs naive interpolate-then-encode pipeline");
  compare->add_option("--frames", cmp.frames_dir, "full-rate ground truth")
      ->required();
  compare->add_option("--events", cmp.events_path,
                      "event file; simulated internally when omitted");
  compare->add_option("--interp", cmp.cfg.interp_factor,
                      "interpolated frames per keyframe interval");
  compare->add_option("--gop", cmp.cfg.gop_length, "keyframes per GOP");
  compare->add_option("--qp", cmp.cfg.base_qp, "matched quantization parameter");
  compare->add_option("--search-range", cmp.cfg.search_range,
                      "motion search radius");
  compare->add_option("--frame-period-us", cmp.frame_period_us,
                      "ground-truth frame period");
  compare->add_option("--threshold", cmp.threshold,
                      "contrast threshold for internal simulation");
  compare->add_option("--alpha", cmp.alpha, "motion timing source")
      ->check(CLI::IsMember({"event", "linear"}));
  compare->add_option("--n-min", cmp.cfg.n_min,
                      "events per block below which timing is linear");
  compare->add_option("--occlusion-sad", cmp.cfg.t_occ,
                      "candidate disagreement threshold");
  compare->add_option("--report", cmp.report_path, "write a JSON report");

  CLI11_PARSE(app, argc, argv);

  try {
    evc::reset_op_counters();
    if (app.got_subcommand(simulate)) return run_simulate(sim);
    if (app.got_subcommand(encode)) return run_encode_cmd(enc);
    if (app.got_subcommand(decode)) return run_decode_cmd(dec);
    if (app.got_subcommand(metrics)) return run_metrics_cmd(met);
    if (app.got_subcommand(compare)) return run_compare_cmd(cmp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
