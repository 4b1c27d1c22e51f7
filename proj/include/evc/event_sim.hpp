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
#ifndef EVC_EVENT_SIM_HPP
#define EVC_EVENT_SIM_HPP

#include <string>
#include <vector>

#include "evc/events.hpp"
#include "evc/frame.hpp"

namespace evc {

// Synthetic event generation stands in for a hybrid RGB-EVS sensor: the
// model is linear-in-log interpolation between frames with per-pixel
// reference-level hysteresis. No noise, no refractory period.
struct SimConfig {
  double contrast_threshold = 0.15;  // log-intensity units
  double log_eps = 1.0;              // added before ln on the 0-255 scale
  uint32_t decimation = 1;           // keep every k-th frame as keyframe
};

// Per pixel: L = ln(I + log_eps) interpolated linearly between frames;
// every time |L - L_ref| reaches the contrast threshold an event fires at
// the crossing time (rounded to microseconds) and L_ref steps by one
// threshold. Output sorted by (t, y, x, polarity).
EventStream simulate_events(const std::vector<Frame>& frames,
                            const SimConfig& cfg);

// Frames at indices 0, k, 2k, ...; a tail that no kept keyframe closes is
// simply never selected.
std::vector<Frame> decimate_keyframes(const std::vector<Frame>& frames,
                                      uint32_t k);

// EVT1 binary layout (little-endian): magic "EVT1", u16 width, u16 height,
// u64 event_count, f32 contrast_threshold, then event_count records of
// {u32 t_us, u16 x, u16 y, i8 polarity}.
void write_evt1(const EventStream& stream, double contrast_threshold,
                const std::string& path);
struct Evt1File {
  EventStream stream;
  float contrast_threshold = 0.0f;
};
Evt1File read_evt1(const std::string& path);

// CSV rows t_us,x,y,p (optional header line). Geometry comes from the
// caller since the format carries none.
EventStream read_events_csv(const std::string& path, uint16_t width,
                            uint16_t height);

// Dispatches on the EVT1 magic, falling back to CSV.
EventStream read_events(const std::string& path, uint16_t width,
                        uint16_t height);

}  // namespace evc

#endif
