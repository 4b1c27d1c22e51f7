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
#include "evc/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evc/counters.hpp"

namespace evc {

namespace {

// basis[u][x] = a(u) * cos((2x+1) u pi / 16), a(0) = sqrt(1/8), else 1/2.
struct DctBasis {
  double b[8][8];

  DctBasis() {
    for (int u = 0; u < 8; ++u) {
      const double a = (u == 0) ? std::sqrt(1.0 / 8.0) : 0.5;
      for (int x = 0; x < 8; ++x) {
        b[u][x] = a * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
      }
    }
  }
};

const DctBasis& basis() {
  static const DctBasis table;
  return table;
}

// Fixed loop nest: rows first, then columns, ascending sum order.
template <typename In>
RealBlock forward_2d(const In& in) {
  const auto& t = basis();
  RealBlock rows{};
  for (int y = 0; y < 8; ++y) {
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int x = 0; x < 8; ++x) s += t.b[u][x] * in[y * 8 + x];
      rows[y * 8 + u] = s;
    }
  }
  RealBlock out{};
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) s += t.b[v][y] * rows[y * 8 + u];
      out[v * 8 + u] = s;
    }
  }
  return out;
}

RealBlock inverse_2d(const RealBlock& in) {
  const auto& t = basis();
  RealBlock rows{};
  for (int v = 0; v < 8; ++v) {
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u) s += t.b[u][x] * in[v * 8 + u];
      rows[v * 8 + x] = s;
    }
  }
  RealBlock out{};
  for (int x = 0; x < 8; ++x) {
    for (int y = 0; y < 8; ++y) {
      double s = 0.0;
      for (int v = 0; v < 8; ++v) s += t.b[v][y] * rows[v * 8 + x];
      out[y * 8 + x] = s;
    }
  }
  return out;
}

constexpr std::array<uint8_t, 64> kZigzag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

}  // namespace

int64_t round_half_away(double v) {
  return static_cast<int64_t>(v >= 0.0 ? std::floor(v + 0.5)
                                       : std::ceil(v - 0.5));
}

double QuantParam::step() const { return std::exp2((qp - 4) / 6.0); }

RealBlock dct8x8(const ResidualBlock& residual) {
  ++op_counters().dct_calls;
  return forward_2d(residual);
}

RealBlock idct8x8(const RealBlock& coeffs) {
  ++op_counters().idct_calls;
  return inverse_2d(coeffs);
}

CoeffBlock quantize(const RealBlock& coeffs, QuantParam qp) {
  ++op_counters().quant_calls;
  const double step = qp.step();
  CoeffBlock out;
  for (int i = 0; i < 64; ++i) {
    const int64_t q = round_half_away(coeffs[i] / step);
    out.values[i] = static_cast<int32_t>(std::clamp<int64_t>(q, -32768, 32767));
  }
  return out;
}

RealBlock dequantize(const CoeffBlock& block, QuantParam qp) {
  ++op_counters().dequant_calls;
  const double step = qp.step();
  RealBlock out{};
  for (int i = 0; i < 64; ++i) out[i] = block.values[i] * step;
  return out;
}

const std::array<uint8_t, 64>& zigzag_order() { return kZigzag; }

std::array<int32_t, 64> zigzag(const CoeffBlock& block) {
  std::array<int32_t, 64> out{};
  for (int i = 0; i < 64; ++i) out[i] = block.values[kZigzag[i]];
  return out;
}

CoeffBlock inverse_zigzag(const std::array<int32_t, 64>& scanned) {
  CoeffBlock out;
  for (int i = 0; i < 64; ++i) out.values[kZigzag[i]] = scanned[i];
  return out;
}

}  // namespace evc
