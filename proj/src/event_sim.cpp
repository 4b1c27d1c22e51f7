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
#include "evc/event_sim.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evc {

namespace {

// Relative slack so a ramp of exactly n thresholds yields n crossings
// despite floating-point rounding of the threshold sum.
constexpr double kCrossSlack = 1.0 - 1e-9;

uint64_t round_time_us(double t) {
  return static_cast<uint64_t>(std::llround(t));
}

template <typename T>
void put_le(std::string& out, T v) {
  for (size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<uint64_t>(v) >> (8 * i)) & 0xff));
  }
}

template <typename T>
T get_le(const uint8_t* p) {
  uint64_t v = 0;
  for (size_t i = sizeof(T); i-- > 0;) v = (v << 8) | p[i];
  T out;
  std::memcpy(&out, &v, sizeof(T));
  return out;
}

}  // namespace

EventStream simulate_events(const std::vector<Frame>& frames,
                            const SimConfig& cfg) {
  if (frames.size() < 2) throw std::invalid_argument("need at least two frames");
  if (cfg.contrast_threshold <= 0) {
    throw std::invalid_argument("contrast threshold must be positive");
  }
  const Frame& first = frames.front();
  for (size_t i = 1; i < frames.size(); ++i) {
    if (!frames[i].same_geometry(first)) {
      throw std::invalid_argument("geometry mismatch");
    }
    if (frames[i].timestamp_us <= frames[i - 1].timestamp_us) {
      throw std::invalid_argument("timestamps must be strictly increasing");
    }
  }

  const uint32_t w = first.width;
  const uint32_t h = first.height;
  const double c = cfg.contrast_threshold;

  EventStream out;
  out.width = static_cast<uint16_t>(w);
  out.height = static_cast<uint16_t>(h);

  std::vector<double> ref(static_cast<size_t>(w) * h);
  for (size_t i = 0; i < ref.size(); ++i) {
    ref[i] = std::log(first.samples[i] + cfg.log_eps);
  }

  for (size_t k = 0; k + 1 < frames.size(); ++k) {
    const Frame& a = frames[k];
    const Frame& b = frames[k + 1];
    const double t0 = static_cast<double>(a.timestamp_us);
    const double t1 = static_cast<double>(b.timestamp_us);
    for (uint32_t y = 0; y < h; ++y) {
      for (uint32_t x = 0; x < w; ++x) {
        const size_t i = static_cast<size_t>(y) * w + x;
        const double l0 = std::log(a.samples[i] + cfg.log_eps);
        const double l1 = std::log(b.samples[i] + cfg.log_eps);
        if (l0 == l1 && std::abs(l1 - ref[i]) < c * kCrossSlack) continue;
        while (true) {
          int8_t polarity;
          double level;
          if (l1 - ref[i] >= c * kCrossSlack) {
            polarity = 1;
            level = ref[i] + c;
          } else if (ref[i] - l1 >= c * kCrossSlack) {
            polarity = -1;
            level = ref[i] - c;
          } else {
            break;
          }
          // Linear interpolation puts the crossing inside (t0, t1].
          double s = (l1 == l0) ? 1.0 : (level - l0) / (l1 - l0);
          s = std::min(std::max(s, 0.0), 1.0);
          Event e;
          e.t_us = round_time_us(t0 + s * (t1 - t0));
          e.x = static_cast<uint16_t>(x);
          e.y = static_cast<uint16_t>(y);
          e.polarity = polarity;
          out.events.push_back(e);
          ref[i] = level;
        }
      }
    }
  }

  sort_events(out);
  return out;
}

std::vector<Frame> decimate_keyframes(const std::vector<Frame>& frames,
                                      uint32_t k) {
  if (frames.empty()) throw std::invalid_argument("no frames");
  if (k == 0) throw std::invalid_argument("decimation must be at least 1");
  std::vector<Frame> out;
  for (size_t i = 0; i < frames.size(); i += k) out.push_back(frames[i]);
  return out;
}

void write_evt1(const EventStream& stream, double contrast_threshold,
                const std::string& path) {
  std::string buf;
  buf.reserve(17 + stream.events.size() * 9);
  buf.append("EVT1");
  put_le<uint16_t>(buf, stream.width);
  put_le<uint16_t>(buf, stream.height);
  put_le<uint64_t>(buf, stream.events.size());
  const float c = static_cast<float>(contrast_threshold);
  uint32_t cbits;
  std::memcpy(&cbits, &c, 4);
  put_le<uint32_t>(buf, cbits);
  for (const Event& e : stream.events) {
    if (e.t_us > 0xffffffffull) {
      throw std::runtime_error("event timestamp exceeds EVT1 range");
    }
    put_le<uint32_t>(buf, static_cast<uint32_t>(e.t_us));
    put_le<uint16_t>(buf, e.x);
    put_le<uint16_t>(buf, e.y);
    buf.push_back(static_cast<char>(e.polarity));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error(path + ": write failed");
}

Evt1File read_evt1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
  if (buf.size() < 20 || std::memcmp(buf.data(), "EVT1", 4) != 0) {
    throw std::runtime_error(path + ": not an EVT1 file");
  }
  Evt1File file;
  file.stream.width = get_le<uint16_t>(buf.data() + 4);
  file.stream.height = get_le<uint16_t>(buf.data() + 6);
  const uint64_t count = get_le<uint64_t>(buf.data() + 8);
  const uint32_t cbits = get_le<uint32_t>(buf.data() + 16);
  std::memcpy(&file.contrast_threshold, &cbits, 4);
  if (buf.size() != 20 + count * 9) {
    throw std::runtime_error(path + ": truncated EVT1 file");
  }
  file.stream.events.reserve(count);
  const uint8_t* p = buf.data() + 20;
  for (uint64_t i = 0; i < count; ++i, p += 9) {
    Event e;
    e.t_us = get_le<uint32_t>(p);
    e.x = get_le<uint16_t>(p + 4);
    e.y = get_le<uint16_t>(p + 6);
    e.polarity = static_cast<int8_t>(p[8]);
    if (e.polarity != 1 && e.polarity != -1) {
      throw std::runtime_error(path + ": invalid event polarity");
    }
    if (e.x >= file.stream.width || e.y >= file.stream.height) {
      throw std::runtime_error(path + ": event outside geometry");
    }
    file.stream.events.push_back(e);
  }
  return file;
}

EventStream read_events_csv(const std::string& path, uint16_t width,
                            uint16_t height) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  EventStream stream;
  stream.width = width;
  stream.height = height;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && !std::isdigit(static_cast<unsigned char>(line[0]))) {
      first = false;
      continue;  // header row
    }
    first = false;
    std::istringstream row(line);
    std::string field;
    long long vals[4];
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(row, field, ',')) {
        throw std::runtime_error(path + ": malformed CSV row");
      }
      vals[i] = std::stoll(field);
    }
    Event e;
    e.t_us = static_cast<uint64_t>(vals[0]);
    e.x = static_cast<uint16_t>(vals[1]);
    e.y = static_cast<uint16_t>(vals[2]);
    e.polarity = static_cast<int8_t>(vals[3]);
    if (e.polarity != 1 && e.polarity != -1) {
      throw std::runtime_error(path + ": invalid event polarity");
    }
    if (vals[1] < 0 || vals[1] >= width || vals[2] < 0 || vals[2] >= height) {
      throw std::runtime_error(path + ": event outside geometry");
    }
    stream.events.push_back(e);
  }
  sort_events(stream);
  return stream;
}

EventStream read_events(const std::string& path, uint16_t width,
                        uint16_t height) {
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw std::runtime_error(path + ": cannot open");
    char magic[4] = {};
    probe.read(magic, 4);
    if (probe.gcount() == 4 && std::memcmp(magic, "EVT1", 4) == 0) {
      Evt1File file = read_evt1(path);
      if (file.stream.width != width || file.stream.height != height) {
        throw std::runtime_error(path + ": geometry mismatch");
      }
      return std::move(file.stream);
    }
  }
  return read_events_csv(path, width, height);
}

}  // namespace evc
