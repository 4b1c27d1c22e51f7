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
#ifndef EVC_PGM_HPP
#define EVC_PGM_HPP

#include <string>
#include <vector>

#include "evc/frame.hpp"

namespace evc {

// Binary PGM (P5, maxval 255), one file per frame.
Frame read_pgm(const std::string& path);
void write_pgm(const Frame& frame, const std::string& path);

// Reads every *.pgm in the directory in lexicographic filename order and
// assigns pocs 0..n-1 and timestamps poc * frame_period_us.
std::vector<Frame> read_frame_dir(const std::string& dir,
                                  uint64_t frame_period_us);

// Writes frames as frame_%06d.pgm, numbered by position in the sequence.
void write_frame_dir(const std::vector<Frame>& frames, const std::string& dir);

std::string frame_file_name(uint32_t index);

}  // namespace evc

#endif
