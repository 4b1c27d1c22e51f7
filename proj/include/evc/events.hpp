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
#ifndef EVC_EVENTS_HPP
#define EVC_EVENTS_HPP

#include <cstdint>
#include <tuple>
#include <vector>

namespace evc {

// One brightness-change event. polarity is +1 or -1.
struct Event {
  uint64_t t_us = 0;
  uint16_t x = 0;
  uint16_t y = 0;
  int8_t polarity = 1;

  friend bool operator==(const Event&, const Event&) = default;
};

// Events sorted by t, ties ordered by (y, x, polarity).
struct EventStream {
  uint16_t width = 0;
  uint16_t height = 0;
  std::vector<Event> events;
};

inline bool event_order(const Event& a, const Event& b) {
  return std::tie(a.t_us, a.y, a.x, a.polarity) <
         std::tie(b.t_us, b.y, b.x, b.polarity);
}

void sort_events(EventStream& stream);
bool events_sorted(const EventStream& stream);

}  // namespace evc

#endif
