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
#include "evc/stream.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <set>
#include <stdexcept>

#include "evc/bframe.hpp"
#include "evc/bitio.hpp"
#include "evc/counters.hpp"
#include "evc/keyframe_codec.hpp"
#include "evc/motion_estimation.hpp"

namespace evc {

namespace {

constexpr uint32_t kCtu = BlockGrid::kCtuSize;
constexpr uint64_t kFixedHeaderBytes = 25;

void put_u8(std::vector<uint8_t>& out, uint8_t v) { out.push_back(v); }

void put_u16le(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32le(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

class ByteReader {
 public:
  explicit ByteReader(const std::vector<uint8_t>& data) : data_(data) {}

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  uint16_t u16le() {
    need(2);
    const uint16_t v =
        static_cast<uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  uint32_t u32le() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::vector<uint8_t> bytes(size_t n) {
    need(n);
    std::vector<uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return out;
  }
  size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(size_t n) const {
    if (pos_ + n > data_.size()) throw std::runtime_error("corrupt header");
  }

  const std::vector<uint8_t>& data_;
  size_t pos_ = 0;
};

uint64_t unit_header_bytes(const EncodedFrameUnit& unit) {
  // type + poc + (qp | two reference pocs) + payload size
  return 1 + 4 + (unit.frame_type == FrameType::B ? 8 : 1) + 4;
}

// The payload must end in strictly less than one byte of zero padding; any
// trailing syntax is an error. For B units this is what enforces that no
// residual rides along.
void check_padding(BitSource& src, const char* error) {
  if (src.bits_remaining() >= 8) throw std::runtime_error(error);
  while (src.bits_remaining() > 0)
    if (src.read_bit() != 0) throw std::runtime_error(error);
}

uint64_t display_timestamp_us(const StreamHeader& header, uint32_t poc) {
  if (header.timebase_den == 0) return 0;
  return static_cast<uint64_t>(poc) * header.timebase_num * 1000000ull /
         header.timebase_den;
}

}  // namespace

Bitstream synthesize_stream(const StreamHeader& header,
                            const std::vector<EncodedFrameUnit>& key_units,
                            const std::vector<EncodedFrameUnit>& b_units,
                            const GopStructure& schedule) {
  std::map<uint32_t, const EncodedFrameUnit*> keys;
  std::map<uint32_t, const EncodedFrameUnit*> bs;
  for (const EncodedFrameUnit& u : key_units) keys[u.poc] = &u;
  for (const EncodedFrameUnit& u : b_units) bs[u.poc] = &u;

  Bitstream out;
  out.header = header;
  out.header.frame_count = static_cast<uint32_t>(schedule.slots.size());
  out.units.reserve(schedule.slots.size());

  std::set<uint32_t> emitted_keys;
  std::vector<const FrameSlot*> pending_bs;
  bool seen_key = false;

  for (const FrameSlot& slot : schedule.slots) {
    if (slot.type == FrameType::B) {
      pending_bs.push_back(&slot);
      continue;
    }
    const auto key = keys.find(slot.poc);
    if (key == keys.end() || key->second->frame_type != slot.type)
      throw std::runtime_error("incomplete GOP");
    out.units.push_back(*key->second);
    emitted_keys.insert(slot.poc);

    if (!seen_key && !pending_bs.empty())
      throw std::runtime_error("incomplete GOP");
    for (const FrameSlot* bslot : pending_bs) {
      const auto b = bs.find(bslot->poc);
      if (b == bs.end() || b->second->frame_type != FrameType::B)
        throw std::runtime_error("incomplete GOP");
      if (!emitted_keys.count(b->second->fwd_ref_poc) ||
          !emitted_keys.count(b->second->bwd_ref_poc))
        throw std::runtime_error("dangling reference");
      out.units.push_back(*b->second);
    }
    pending_bs.clear();
    seen_key = true;
  }
  if (!pending_bs.empty()) throw std::runtime_error("incomplete GOP");
  if (out.units.size() != schedule.slots.size() ||
      keys.size() + bs.size() != schedule.slots.size())
    throw std::runtime_error("incomplete GOP");
  return out;
}

std::vector<uint8_t> write_bitstream(const Bitstream& bs) {
  std::vector<uint8_t> out;
  out.insert(out.end(), {'E', 'V', 'C', '1'});
  put_u16le(out, bs.header.width);
  put_u16le(out, bs.header.height);
  put_u8(out, bs.header.block_size);
  put_u8(out, bs.header.tu_size);
  put_u8(out, bs.header.interp_factor);
  put_u8(out, bs.header.gop_length);
  put_u32le(out, bs.header.frame_count);
  put_u8(out, bs.header.base_qp);
  put_u32le(out, bs.header.timebase_num);
  put_u32le(out, bs.header.timebase_den);

  for (const EncodedFrameUnit& unit : bs.units) {
    put_u8(out, static_cast<uint8_t>(unit.frame_type));
    put_u32le(out, unit.poc);
    if (unit.frame_type == FrameType::B) {
      put_u32le(out, unit.fwd_ref_poc);
      put_u32le(out, unit.bwd_ref_poc);
    } else {
      put_u8(out, static_cast<uint8_t>(unit.qp));
    }
    put_u32le(out, static_cast<uint32_t>(unit.payload.size()));
    out.insert(out.end(), unit.payload.begin(), unit.payload.end());
  }
  return out;
}

void write_bitstream_file(const Bitstream& bs, const std::string& path) {
  const std::vector<uint8_t> data = write_bitstream(bs);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f.write(reinterpret_cast<const char*>(data.data()),
          static_cast<std::streamsize>(data.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

Bitstream parse_bitstream(const std::vector<uint8_t>& data) {
  if (data.size() < 4 || std::memcmp(data.data(), "EVC1", 4) != 0)
    throw std::runtime_error("not an EVC stream");

  ByteReader r(data);
  r.bytes(4);  // magic
  Bitstream bs;
  bs.header.width = r.u16le();
  bs.header.height = r.u16le();
  bs.header.block_size = r.u8();
  bs.header.tu_size = r.u8();
  bs.header.interp_factor = r.u8();
  bs.header.gop_length = r.u8();
  bs.header.frame_count = r.u32le();
  bs.header.base_qp = r.u8();
  bs.header.timebase_num = r.u32le();
  bs.header.timebase_den = r.u32le();

  if (bs.header.width == 0 || bs.header.height == 0 ||
      bs.header.block_size != BlockGrid::kCtuSize ||
      bs.header.tu_size != BlockGrid::kTuSize || bs.header.gop_length == 0 ||
      bs.header.timebase_den == 0)
    throw std::runtime_error("corrupt header");

  bs.units.reserve(bs.header.frame_count);
  for (uint32_t i = 0; i < bs.header.frame_count; ++i) {
    EncodedFrameUnit unit;
    const uint8_t type = r.u8();
    if (type > 2) throw std::runtime_error("corrupt header");
    unit.frame_type = static_cast<FrameType>(type);
    unit.poc = r.u32le();
    if (unit.frame_type == FrameType::B) {
      unit.fwd_ref_poc = r.u32le();
      unit.bwd_ref_poc = r.u32le();
      if (!(unit.fwd_ref_poc < unit.poc && unit.poc < unit.bwd_ref_poc))
        throw std::runtime_error("corrupt header");
    } else {
      unit.qp = r.u8();
    }
    const uint32_t payload_size = r.u32le();
    unit.payload = r.bytes(payload_size);
    bs.units.push_back(std::move(unit));
  }
  if (r.remaining() != 0) throw std::runtime_error("corrupt header");
  return bs;
}

Bitstream parse_bitstream_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(f)),
                            std::istreambuf_iterator<char>());
  return parse_bitstream(data);
}

uint64_t container_header_bytes(const Bitstream& bs) {
  uint64_t total = kFixedHeaderBytes;
  for (const EncodedFrameUnit& unit : bs.units) total += unit_header_bytes(unit);
  return total;
}

uint64_t payload_bytes(const Bitstream& bs) {
  uint64_t total = 0;
  for (const EncodedFrameUnit& unit : bs.units) total += unit.payload.size();
  return total;
}

Frame decode_keyframe(const EncodedFrameUnit& unit, FrameBuffer& buf,
                      uint32_t padded_width, uint32_t padded_height) {
  if (unit.frame_type == FrameType::B)
    throw std::invalid_argument("keyframe decoder got a B unit");
  if (unit.frame_type == FrameType::P && !buf.valid)
    throw std::runtime_error("missing reference frame");

  const uint32_t blocks_x = padded_width / kCtu;
  const uint32_t blocks_y = padded_height / kCtu;
  Frame recon = make_frame(padded_width, padded_height);
  recon.poc = unit.poc;

  BitSource src(unit.payload);
  MvChain inter_chain(blocks_x, blocks_y);
  const QuantParam qp{unit.qp};

  for (uint32_t by = 0; by < blocks_y; ++by) {
    for (uint32_t bx = 0; bx < blocks_x; ++bx) {
      const uint32_t mode_raw = read_ue(src);
      if (mode_raw > static_cast<uint32_t>(CuMode::inter))
        throw std::runtime_error("corrupt keyframe payload");
      const CuMode mode = static_cast<CuMode>(mode_raw);

      Tile16 pred;
      if (mode == CuMode::inter) {
        if (unit.frame_type == FrameType::I)
          throw std::runtime_error("corrupt keyframe payload");
        const MotionVector predicted = inter_chain.predict(bx, by);
        const int32_t mvd_x = read_se(src);
        const int32_t mvd_y = read_se(src);
        const MotionVector mv{predicted.dx + mvd_x, predicted.dy + mvd_y};
        inter_chain.set(bx, by, mv);
        pred = inter_predict_tile(buf.frame, bx, by, mv);
      } else {
        pred = intra_predict(recon, bx, by, mode);
      }

      std::array<CoeffBlock, 4> tus;
      for (uint32_t t = 0; t < 4; ++t)
        tus[t] = inverse_zigzag(read_coeffs(src));
      reconstruct_cu(recon, bx, by, pred, tus, qp);
    }
  }
  check_padding(src, "corrupt keyframe payload");

  buf.frame = recon;
  buf.valid = true;
  return recon;
}

Frame decode_bframe(const EncodedFrameUnit& unit, const Frame& fwd_ref,
                    const Frame& bwd_ref) {
  if (unit.frame_type != FrameType::B)
    throw std::invalid_argument("B decoder got a keyframe unit");
  if (!fwd_ref.same_geometry(bwd_ref))
    throw std::runtime_error("geometry mismatch");

  const uint32_t blocks_x = fwd_ref.width / kCtu;
  const uint32_t blocks_y = fwd_ref.height / kCtu;
  Frame out = make_frame(fwd_ref.width, fwd_ref.height);
  out.poc = unit.poc;

  BitSource src(unit.payload);
  MvChain fwd_chain(blocks_x, blocks_y);
  MvChain bwd_chain(blocks_x, blocks_y);

  for (uint32_t by = 0; by < blocks_y; ++by) {
    for (uint32_t bx = 0; bx < blocks_x; ++bx) {
      const uint32_t mode_raw = read_ue(src);
      if (mode_raw > static_cast<uint32_t>(BMode::bwd))
        throw std::runtime_error("corrupt B payload");
      const BMode mode = static_cast<BMode>(mode_raw);

      MotionVector to_fwd{}, to_bwd{};
      if (mode != BMode::bwd) {
        const MotionVector predicted = fwd_chain.predict(bx, by);
        const int32_t mvd_x = read_se(src);
        const int32_t mvd_y = read_se(src);
        to_fwd = {predicted.dx + mvd_x, predicted.dy + mvd_y};
        fwd_chain.set(bx, by, to_fwd);
      }
      if (mode != BMode::fwd) {
        const MotionVector predicted = bwd_chain.predict(bx, by);
        const int32_t mvd_x = read_se(src);
        const int32_t mvd_y = read_se(src);
        to_bwd = {predicted.dx + mvd_x, predicted.dy + mvd_y};
        bwd_chain.set(bx, by, to_bwd);
      }

      Tile16 tile;
      if (mode == BMode::bi) {
        const Tile16 pf = inter_predict_tile(fwd_ref, bx, by, to_fwd);
        const Tile16 pb = inter_predict_tile(bwd_ref, bx, by, to_bwd);
        op_counters().mc_block_warps += 2;
        for (size_t i = 0; i < tile.size(); ++i)
          tile[i] = static_cast<uint8_t>((int(pf[i]) + int(pb[i]) + 1) / 2);
      } else if (mode == BMode::fwd) {
        tile = inter_predict_tile(fwd_ref, bx, by, to_fwd);
        op_counters().mc_block_warps += 1;
      } else {
        tile = inter_predict_tile(bwd_ref, bx, by, to_bwd);
        op_counters().mc_block_warps += 1;
      }

      const uint32_t x0 = bx * kCtu, y0 = by * kCtu;
      for (uint32_t r = 0; r < kCtu; ++r)
        for (uint32_t c = 0; c < kCtu; ++c)
          out.at(x0 + c, y0 + r) = tile[r * kCtu + c];
    }
  }
  check_padding(src, "corrupt B payload");
  return out;
}

std::vector<Frame> decode_stream(const Bitstream& bs) {
  const uint32_t padded_w = round_up(bs.header.width, kCtu);
  const uint32_t padded_h = round_up(bs.header.height, kCtu);

  FrameBuffer buf;
  std::map<uint32_t, Frame> keyframes;
  std::vector<Frame> decoded;
  decoded.reserve(bs.units.size());

  for (const EncodedFrameUnit& unit : bs.units) {
    if (unit.frame_type == FrameType::B) {
      const auto fwd = keyframes.find(unit.fwd_ref_poc);
      const auto bwd = keyframes.find(unit.bwd_ref_poc);
      if (fwd == keyframes.end() || bwd == keyframes.end())
        throw std::runtime_error("missing reference frame");
      decoded.push_back(decode_bframe(unit, fwd->second, bwd->second));
    } else {
      Frame frame = decode_keyframe(unit, buf, padded_w, padded_h);
      keyframes.emplace(frame.poc, frame);
      decoded.push_back(std::move(frame));
    }
  }

  std::stable_sort(decoded.begin(), decoded.end(),
                   [](const Frame& a, const Frame& b) { return a.poc < b.poc; });
  std::vector<Frame> out;
  out.reserve(decoded.size());
  for (Frame& frame : decoded) {
    Frame cropped = crop_frame(frame, bs.header.width, bs.header.height);
    cropped.poc = frame.poc;
    cropped.timestamp_us = display_timestamp_us(bs.header, frame.poc);
    out.push_back(std::move(cropped));
  }
  return out;
}

}  // namespace evc
