// Copyright 2026 The cfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFL_RANGE_CODER_H_
#define CFL_RANGE_CODER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "cfl/cdf.h"
#include "cfl/error.h"

namespace cfl {

// Byte-oriented multi-symbol range coder. The interval is a 32-bit window
// over a 33-bit `low`; bytes leave the window as soon as the range drops
// below 2^24, and carries ripple into pending 0xFF bytes.
class RangeEncoder {
 public:
  // Codes `symbol` and then adapts `cdf` toward it.
  void Encode(int symbol, CdfTable& cdf) {
    EncodeFrozen(symbol, cdf);
    cdf.Update(symbol);
  }

  void EncodeFrozen(int symbol, const CdfTable& cdf) {
    cdf.CheckSymbol(symbol);
    const uint32_t r = range_ >> kCdfBits;
    const uint32_t lo = cdf.low(symbol);
    low_ += static_cast<uint64_t>(r) * lo;
    if (symbol == cdf.size() - 1) {
      range_ -= r * lo;
    } else {
      range_ = r * (cdf.high(symbol) - lo);
    }
    Normalize();
  }

  // Equiprobable bits, most significant first.
  void EncodeBits(uint32_t value, int num_bits) {
    for (int i = num_bits - 1; i >= 0; --i) {
      const uint32_t half = range_ >> 1;
      if ((value >> i) & 1) {
        low_ += half;
        range_ -= half;
      } else {
        range_ = half;
      }
      Normalize();
    }
  }

  // Terminates the stream. The encoder must not be used afterwards.
  std::vector<uint8_t> Finish() {
    // Pick the value in [low, low + range) with the most trailing zeros; the
    // zero bytes it produces are dropped and re-created by decoder padding.
    for (int k = 32; k >= 0; --k) {
      const uint64_t mask = (uint64_t{1} << k) - 1;
      const uint64_t v = (low_ + mask) & ~mask;
      if (v < low_ + range_) {
        low_ = v;
        break;
      }
    }
    for (int i = 0; i < 5; ++i) ShiftLow();
    const size_t keep_floor = out_.size() >= 4 ? out_.size() - 4 : 0;
    while (out_.size() > keep_floor && out_.back() == 0) out_.pop_back();
    return std::move(out_);
  }

  // Bits emitted so far, excluding the bytes still inside the window.
  size_t bytes_emitted() const { return out_.size(); }

 private:
  void Normalize() {
    while (range_ < (1u << 24)) {
      range_ <<= 8;
      ShiftLow();
    }
  }

  void ShiftLow() {
    if (low_ < 0xFF000000u || low_ >= (uint64_t{1} << 32)) {
      const auto carry = static_cast<uint8_t>(low_ >> 32);
      if (has_cache_) out_.push_back(static_cast<uint8_t>(cache_ + carry));
      for (; pending_ff_ > 0; --pending_ff_) {
        out_.push_back(static_cast<uint8_t>(0xFF + carry));
      }
      cache_ = static_cast<uint8_t>(low_ >> 24);
      has_cache_ = true;
    } else {
      ++pending_ff_;
    }
    low_ = (low_ & 0x00FFFFFFu) << 8;
  }

  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint8_t cache_ = 0;
  bool has_cache_ = false;
  uint64_t pending_ff_ = 0;
  std::vector<uint8_t> out_;
};

class RangeDecoder {
 public:
  // Reads past the end return zero; more than kMaxPadding of them means the
  // caller is decoding symbols that were never written.
  static constexpr int kMaxPadding = 4;

  explicit RangeDecoder(std::span<const uint8_t> data) : data_(data) {
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | NextByte();
  }

  int Decode(CdfTable& cdf) {
    const int symbol = DecodeFrozen(cdf);
    cdf.Update(symbol);
    return symbol;
  }

  int DecodeFrozen(const CdfTable& cdf) {
    const uint32_t r = range_ >> kCdfBits;
    uint32_t target = code_ / r;
    if (target >= kCdfTotal) target = kCdfTotal - 1;
    int symbol = 0;
    while (symbol + 1 < cdf.size() && cdf.low(symbol + 1) <= target) ++symbol;
    const uint32_t lo = cdf.low(symbol);
    code_ -= r * lo;
    if (symbol == cdf.size() - 1) {
      range_ -= r * lo;
    } else {
      range_ = r * (cdf.high(symbol) - lo);
    }
    Normalize();
    return symbol;
  }

  uint32_t DecodeBits(int num_bits) {
    uint32_t value = 0;
    for (int i = 0; i < num_bits; ++i) {
      const uint32_t half = range_ >> 1;
      uint32_t bit = 0;
      if (code_ >= half) {
        bit = 1;
        code_ -= half;
        range_ -= half;
      } else {
        range_ = half;
      }
      value = (value << 1) | bit;
      Normalize();
    }
    return value;
  }

 private:
  void Normalize() {
    while (range_ < (1u << 24)) {
      code_ = (code_ << 8) | NextByte();
      range_ <<= 8;
    }
  }

  uint8_t NextByte() {
    if (pos_ < data_.size()) return data_[pos_++];
    if (++padding_ > kMaxPadding) {
      Fail(ErrorCode::kTruncatedStream, "range decoder ran past the stream");
    }
    return 0;
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
  int padding_ = 0;
  uint32_t code_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
};

}  // namespace cfl

#endif  // CFL_RANGE_CODER_H_
