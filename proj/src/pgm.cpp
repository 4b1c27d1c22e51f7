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
#include "evc/pgm.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace evc {

namespace fs = std::filesystem;

// Skips whitespace and '#' comment lines between header tokens.
static int next_header_token(std::istream& in) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  return c;
}

static uint64_t read_header_uint(std::istream& in, const std::string& path) {
  int c = next_header_token(in);
  if (c == EOF || !std::isdigit(c)) {
    throw std::runtime_error(path + ": malformed PGM header");
  }
  uint64_t v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    c = in.get();
  }
  if (c != EOF) in.unget();
  return v;
}

Frame read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || m1 != '5') {
    throw std::runtime_error(path + ": not a binary PGM (P5)");
  }
  const uint64_t width = read_header_uint(in, path);
  const uint64_t height = read_header_uint(in, path);
  const uint64_t maxval = read_header_uint(in, path);
  if (maxval != 255) {
    throw std::runtime_error(path + ": only maxval 255 is supported");
  }
  in.get();  // single whitespace after maxval

  if (width == 0 || height == 0 || width > 0xffff || height > 0xffff) {
    throw std::runtime_error(path + ": unsupported dimensions");
  }

  Frame f;
  f.width = static_cast<uint32_t>(width);
  f.height = static_cast<uint32_t>(height);
  f.samples.resize(width * height);
  in.read(reinterpret_cast<char*>(f.samples.data()),
          static_cast<std::streamsize>(f.samples.size()));
  if (static_cast<size_t>(in.gcount()) != f.samples.size()) {
    throw std::runtime_error(path + ": truncated PGM data");
  }
  return f;
}

void write_pgm(const Frame& frame, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.samples.data()),
            static_cast<std::streamsize>(frame.samples.size()));
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<Frame> read_frame_dir(const std::string& dir,
                                  uint64_t frame_period_us) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      names.push_back(entry.path().string());
    }
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) throw std::runtime_error(dir + ": no frames");

  std::vector<Frame> frames;
  frames.reserve(names.size());
  for (size_t i = 0; i < names.size(); ++i) {
    Frame f = read_pgm(names[i]);
    f.poc = static_cast<uint32_t>(i);
    f.timestamp_us = i * frame_period_us;
    if (!f.same_geometry(frames.empty() ? f : frames.front())) {
      throw std::runtime_error(names[i] + ": geometry mismatch");
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

std::string frame_file_name(uint32_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06u.pgm", index);
  return buf;
}

void write_frame_dir(const std::vector<Frame>& frames, const std::string& dir) {
  fs::create_directories(dir);
  for (size_t i = 0; i < frames.size(); ++i) {
    write_pgm(frames[i], (fs::path(dir) / frame_file_name(static_cast<uint32_t>(i))).string());
  }
}

}  // namespace evc
