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
#ifndef EVC_COUNTERS_HPP
#define EVC_COUNTERS_HPP

#include <cstdint>

namespace evc {

// Global operation counters used as the compute proxy in reports and tests.
// Single-threaded by contract: the encode/decode loops own them exclusively.
struct OpCounters {
  uint64_t sad_evals = 0;      // one per candidate block comparison
  uint64_t dct_calls = 0;      // forward 8x8 transforms
  uint64_t idct_calls = 0;     // inverse 8x8 transforms
  uint64_t quant_calls = 0;    // 8x8 block quantizations
  uint64_t dequant_calls = 0;  // 8x8 block dequantizations
  // Block warps that produce intermediate-frame pixels (B-frame motion
  // compensation at decode time, explicit interpolation in the naive
  // pipeline). Keyframe inter prediction is not counted here.
  uint64_t mc_block_warps = 0;
  // Candidate warps inside B mode selection, kept in a separate bucket so
  // the encode path can assert mc_block_warps == 0.
  uint64_t mode_decision_warps = 0;

  uint64_t transform_total() const { return dct_calls + idct_calls; }
};

OpCounters& op_counters();
void reset_op_counters();

}  // namespace evc

#endif
