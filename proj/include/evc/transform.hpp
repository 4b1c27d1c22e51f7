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
#ifndef EVC_TRANSFORM_HPP
#define EVC_TRANSFORM_HPP

#include <array>
#include <cstdint>

namespace evc {

using ResidualBlock = std::array<int32_t, 64>;  // 8x8 row-major, [-255, 255]
using RealBlock = std::array<double, 64>;       // 8x8 real coefficients

// Quantized transform coefficients, clamped to signed 16 bits.
struct CoeffBlock {
  std::array<int32_t, 64> values{};

  friend bool operator==(const CoeffBlock&, const CoeffBlock&) = default;
};

// qp in [0, 51]; step = 2^((qp-4)/6), so qp 4 is unit step.
struct QuantParam {
  int qp = 4;

  double step() const;
};

// Orthonormal 2-D type-II DCT; a constant block of value c transforms to
// DC = 8c. Encoder and decoder share these code paths, so float drift is
// structurally zero.
RealBlock dct8x8(const ResidualBlock& residual);
RealBlock idct8x8(const RealBlock& coeffs);

// round(c / step) half-away-from-zero, clamped to signed 16 bits.
CoeffBlock quantize(const RealBlock& coeffs, QuantParam qp);
RealBlock dequantize(const CoeffBlock& block, QuantParam qp);

// Fixed 8x8 JPEG-order zigzag scan.
std::array<int32_t, 64> zigzag(const CoeffBlock& block);
CoeffBlock inverse_zigzag(const std::array<int32_t, 64>& scanned);

// scan index -> raster index
const std::array<uint8_t, 64>& zigzag_order();

int64_t round_half_away(double v);

}  // namespace evc

#endif
