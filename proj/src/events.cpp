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
#include "evc/events.hpp"

#include <algorithm>

namespace evc {

void sort_events(EventStream& stream) {
  std::stable_sort(stream.events.begin(), stream.events.end(), event_order);
}

bool events_sorted(const EventStream& stream) {
  return std::is_sorted(stream.events.begin(), stream.events.end(),
                        event_order);
}

}  // namespace evc
