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

#ifndef CFL_CDF_H_
#define CFL_CDF_H_

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>

#include "cfl/error.h"

namespace cfl {

inline constexpr int kCdfBits = 15;
inline constexpr uint32_t kCdfTotal = 1u << kCdfBits;
inline constexpr int kMaxAlphabet = 16;
inline constexpr int kDefaultAdaptRate = 5;
// Probability mass the adaptation target leaves on every symbol.
inline constexpr uint32_t kCdfTargetFloor = 32;

// Rates are carried in 1/512 bit units.
inline constexpr int kRateFracBits = 9;
inline constexpr uint32_t kRateOne = 1u << kRateFracBits;

inline double RateToBits(uint64_t rate_q9) {
  return static_cast<double>(rate_q9) / kRateOne;
}

// Adaptive cumulative distribution over an alphabet of at most 16 symbols.
// cum[0] = 0 < cum[1] < ... < cum[n] = 2^15; symbol s owns
// [cum[s], cum[s + 1]).
class CdfTable {
 public:
  CdfTable() : CdfTable(2) {}

  explicit CdfTable(int num_symbols, int adapt_rate = kDefaultAdaptRate)
      : size_(num_symbols), rate_(adapt_rate) {
    if (num_symbols < 2 || num_symbols > kMaxAlphabet) {
      Fail(ErrorCode::kInvalidArgument, "alphabet size must be in [2, 16]");
    }
    for (int i = 0; i <= size_; ++i) {
      cum_[i] = static_cast<uint16_t>((static_cast<uint32_t>(i) * kCdfTotal) / size_);
    }
  }

  // Table with the given (non-zero) frequencies, which must sum to 2^15.
  static CdfTable FromFrequencies(std::span<const uint32_t> freq,
                                  int adapt_rate = kDefaultAdaptRate) {
    CdfTable t(static_cast<int>(freq.size()), adapt_rate);
    uint32_t acc = 0;
    for (size_t i = 0; i < freq.size(); ++i) {
      if (freq[i] == 0) Fail(ErrorCode::kInvalidArgument, "zero frequency");
      acc += freq[i];
      t.cum_[i + 1] = static_cast<uint16_t>(acc);
    }
    if (acc != kCdfTotal) {
      Fail(ErrorCode::kInvalidArgument, "frequencies must sum to 2^15");
    }
    return t;
  }

  int size() const { return size_; }
  int adapt_rate() const { return rate_; }
  uint32_t low(int symbol) const { return cum_[symbol]; }
  uint32_t high(int symbol) const { return cum_[symbol + 1]; }
  uint32_t frequency(int symbol) const { return high(symbol) - low(symbol); }

  void CheckSymbol(int symbol) const {
    if (symbol < 0 || symbol >= size_) {
      Fail(ErrorCode::kSymbolOutOfRange,
           std::to_string(symbol) + " not in [0, " + std::to_string(size_) + ")");
    }
  }

  // Moves the distribution 2^-rate of the way toward a target that puts all
  // mass on `symbol` except kCdfTargetFloor per symbol. Every interval keeps
  // a width of at least 1.
  void Update(int symbol) {
    CheckSymbol(symbol);
    const uint32_t spare = kCdfTotal - size_ * kCdfTargetFloor;
    for (int i = 1; i < size_; ++i) {
      const int32_t target = static_cast<int32_t>(
          i * kCdfTargetFloor + (i > symbol ? spare : 0));
      const int32_t delta = target - static_cast<int32_t>(cum_[i]);
      cum_[i] = static_cast<uint16_t>(static_cast<int32_t>(cum_[i]) + (delta >> rate_));
    }
  }

  bool IsValid() const {
    if (cum_[0] != 0 || cum_[size_] != kCdfTotal) return false;
    for (int i = 0; i < size_; ++i) {
      if (cum_[i + 1] <= cum_[i]) return false;
    }
    return true;
  }

  friend bool operator==(const CdfTable&, const CdfTable&) = default;

 private:
  int size_;
  int rate_;
  std::array<uint16_t, kMaxAlphabet + 1> cum_{};
};

// floor(log2(x) * 2^12) using integer squaring only, so every platform gets
// the same rates.
inline uint32_t Log2Q12(uint32_t x) {
  const int int_part = std::bit_width(x) - 1;
  // Mantissa in Q30, in [1, 2).
  uint64_t m = int_part >= 30 ? static_cast<uint64_t>(x) >> (int_part - 30)
                              : static_cast<uint64_t>(x) << (30 - int_part);
  uint32_t result = static_cast<uint32_t>(int_part) << 12;
  for (int bit = 11; bit >= 0; --bit) {
    m = (m * m) >> 30;
    if (m >= (uint64_t{2} << 30)) {
      m >>= 1;
      result |= 1u << bit;
    }
  }
  return result;
}

// -log2(frequency / 2^15) in 1/512 bit units.
inline uint32_t SymbolCostQ9(uint32_t frequency) {
  const uint32_t log2_q9 = (Log2Q12(frequency) + 4) >> 3;
  return (static_cast<uint32_t>(kCdfBits) << kRateFracBits) - log2_q9;
}

inline uint32_t EstimateRateQ9(const CdfTable& cdf, int symbol) {
  cdf.CheckSymbol(symbol);
  return SymbolCostQ9(cdf.frequency(symbol));
}

inline double EstimateRateBits(const CdfTable& cdf, int symbol) {
  return RateToBits(EstimateRateQ9(cdf, symbol));
}

}  // namespace cfl

#endif  // CFL_CDF_H_
