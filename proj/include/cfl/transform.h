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

#ifndef CFL_TRANSFORM_H_
#define CFL_TRANSFORM_H_

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <span>
#include <vector>

#include "cfl/cdf.h"
#include "cfl/cfl_core.h"
#include "cfl/error.h"
#include "cfl/range_coder.h"

namespace cfl {

inline bool IsTransformDim(int n) { return n == 4 || n == 8 || n == 16 || n == 32; }

inline void CheckTransformSize(BlockSize size) {
  if (!IsTransformDim(size.width) || !IsTransformDim(size.height)) {
    Fail(ErrorCode::kUnsupportedBlockSize,
         "transform size " + std::to_string(size.width) + "x" +
             std::to_string(size.height) + " not in {4,8,16,32}");
  }
}

namespace internal {

inline int Log2Dim(int n) { return std::countr_zero(static_cast<unsigned>(n)); }

// basis[k * n + i] = s(k) cos(pi (2i + 1) k / 2n), orthonormal.
inline const std::vector<double>& DctBasis(int n) {
  static const std::array<std::vector<double>, 6> tables = [] {
    std::array<std::vector<double>, 6> t;
    for (int log2n = 2; log2n <= 5; ++log2n) {
      const int len = 1 << log2n;
      auto& b = t[log2n];
      b.resize(len * len);
      for (int k = 0; k < len; ++k) {
        const double s = k == 0 ? std::sqrt(1.0 / len) : std::sqrt(2.0 / len);
        for (int i = 0; i < len; ++i) {
          b[k * len + i] = s * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * len));
        }
      }
    }
    return t;
  }();
  return tables[Log2Dim(n)];
}

// Zig-zag over anti-diagonals, alternating direction, for any w x h.
inline std::vector<int> MakeScan(int w, int h) {
  std::vector<int> scan;
  scan.reserve(w * h);
  for (int d = 0; d < w + h - 1; ++d) {
    if (d % 2 == 0) {
      for (int y = std::min(d, h - 1); y >= 0 && d - y < w; --y) scan.push_back(y * w + d - y);
    } else {
      for (int x = std::min(d, w - 1); x >= 0 && d - x < h; --x) scan.push_back((d - x) * w + x);
    }
  }
  return scan;
}

}  // namespace internal

inline const std::vector<int>& ScanOrder(BlockSize size) {
  CheckTransformSize(size);
  static const std::array<std::array<std::vector<int>, 6>, 6> scans = [] {
    std::array<std::array<std::vector<int>, 6>, 6> s;
    for (int lw = 2; lw <= 5; ++lw) {
      for (int lh = 2; lh <= 5; ++lh) s[lw][lh] = internal::MakeScan(1 << lw, 1 << lh);
    }
    return s;
  }();
  return scans[internal::Log2Dim(size.width)][internal::Log2Dim(size.height)];
}

// Separable orthonormal DCT-II in double precision, rounded to integers.
inline std::vector<int32_t> ForwardDct(std::span<const int32_t> residual, BlockSize size) {
  CheckTransformSize(size);
  const int w = size.width, h = size.height;
  if (residual.size() != static_cast<size_t>(w * h)) {
    Fail(ErrorCode::kDimensionMismatch, "residual size does not match block");
  }
  const auto& bw = internal::DctBasis(w);
  const auto& bh = internal::DctBasis(h);
  std::vector<double> tmp(w * h);
  for (int y = 0; y < h; ++y) {
    for (int k = 0; k < w; ++k) {
      double acc = 0;
      for (int x = 0; x < w; ++x) acc += bw[k * w + x] * residual[y * w + x];
      tmp[y * w + k] = acc;
    }
  }
  std::vector<int32_t> out(w * h);
  for (int k = 0; k < h; ++k) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int y = 0; y < h; ++y) acc += bh[k * h + y] * tmp[y * w + x];
      out[k * w + x] = static_cast<int32_t>(std::llround(acc));
    }
  }
  return out;
}

inline std::vector<int32_t> InverseDct(std::span<const double> coeffs, BlockSize size) {
  CheckTransformSize(size);
  const int w = size.width, h = size.height;
  if (coeffs.size() != static_cast<size_t>(w * h)) {
    Fail(ErrorCode::kDimensionMismatch, "coefficient count does not match block");
  }
  const auto& bw = internal::DctBasis(w);
  const auto& bh = internal::DctBasis(h);
  std::vector<double> tmp(w * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int k = 0; k < h; ++k) acc += bh[k * h + y] * coeffs[k * w + x];
      tmp[y * w + x] = acc;
    }
  }
  std::vector<int32_t> out(w * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int k = 0; k < w; ++k) acc += bw[k * w + x] * tmp[y * w + k];
      out[y * w + x] = static_cast<int32_t>(std::llround(acc));
    }
  }
  return out;
}

// Dead-zone quantizer: magnitudes are rounded up only past 2/3 of a step.
inline constexpr double kQuantRounding = 1.0 / 3.0;

inline int32_t QuantizeCoefficient(int32_t coeff, double step) {
  const auto level =
      static_cast<int32_t>(std::floor(std::abs(coeff) / step + kQuantRounding));
  return coeff < 0 ? -level : level;
}

inline double DequantizeCoefficient(int32_t level, double step) { return level * step; }

inline std::vector<int32_t> ReconstructResidual(std::span<const int32_t> levels,
                                                BlockSize size, double step) {
  std::vector<double> deq(levels.size());
  for (size_t i = 0; i < levels.size(); ++i) deq[i] = DequantizeCoefficient(levels[i], step);
  return InverseDct(deq, size);
}

// Coefficient symbols, in scan order:
//   run   (16-ary) zeros before the next non-zero level; 0..13 literal,
//         14 = escape followed by Exp-Golomb(run - 14) bypass bits,
//         15 = end of block.
//   level (16-ary) |level| - 1; 15 = escape followed by Exp-Golomb(|level| - 16).
//   sign  one bypass bit.
// No end-of-block symbol follows a level in the last scan position.
inline constexpr int kRunEscape = 14;
inline constexpr int kEndOfBlock = 15;
inline constexpr int kLevelEscape = 15;
inline constexpr int kNumCoefClasses = 3;

struct CoefContexts {
  std::array<CdfTable, kNumCoefClasses> run{CdfTable(16), CdfTable(16), CdfTable(16)};
  std::array<CdfTable, kNumCoefClasses> level{CdfTable(16), CdfTable(16), CdfTable(16)};

  static int PositionClass(int scan_pos) {
    return scan_pos == 0 ? 0 : (scan_pos < 10 ? 1 : 2);
  }
};

namespace internal {

inline int ExpGolombLength(uint32_t value) {
  return 2 * (std::bit_width(value + 1) - 1) + 1;
}

template <typename BitsFn>
void EmitExpGolomb(uint32_t value, BitsFn&& bits) {
  const int n = std::bit_width(value + 1) - 1;
  if (n > 0) bits(0, n);
  bits(value + 1, n + 1);
}

// Walks the symbol sequence for `levels`; `sym(cdf, s)` and `bits(v, n)`
// receive each coded element.
template <typename Ctx, typename SymFn, typename BitsFn>
void EmitCoefficients(Ctx& ctx, std::span<const int32_t> levels, BlockSize size,
                      SymFn&& sym, BitsFn&& bits) {
  const auto& scan = ScanOrder(size);
  const int count = static_cast<int>(scan.size());
  if (levels.size() != scan.size()) {
    Fail(ErrorCode::kDimensionMismatch, "level count does not match block");
  }
  int pos = 0;
  while (pos < count) {
    int next = pos;
    while (next < count && levels[scan[next]] == 0) ++next;
    auto& run_cdf = ctx.run[CoefContexts::PositionClass(pos)];
    if (next == count) {
      sym(run_cdf, kEndOfBlock);
      return;
    }
    const int run = next - pos;
    if (run < kRunEscape) {
      sym(run_cdf, run);
    } else {
      sym(run_cdf, kRunEscape);
      EmitExpGolomb(static_cast<uint32_t>(run - kRunEscape), bits);
    }
    const int32_t v = levels[scan[next]];
    const auto mag = static_cast<uint32_t>(std::abs(v));
    auto& level_cdf = ctx.level[CoefContexts::PositionClass(next)];
    if (mag - 1 < kLevelEscape) {
      sym(level_cdf, static_cast<int>(mag - 1));
    } else {
      sym(level_cdf, kLevelEscape);
      EmitExpGolomb(mag - 1 - kLevelEscape, bits);
    }
    bits(v < 0 ? 1u : 0u, 1);
    pos = next + 1;
  }
}

inline uint32_t ReadExpGolomb(RangeDecoder& dec) {
  int n = 0;
  while (dec.DecodeBits(1) == 0) {
    if (++n > 30) Fail(ErrorCode::kSymbolOutOfRange, "Exp-Golomb prefix too long");
  }
  const uint32_t rest = n > 0 ? dec.DecodeBits(n) : 0;
  return ((1u << n) | rest) - 1;
}

}  // namespace internal

inline void EncodeCoefficients(RangeEncoder& enc, CoefContexts& ctx,
                               std::span<const int32_t> levels, BlockSize size) {
  internal::EmitCoefficients(
      ctx, levels, size, [&](CdfTable& cdf, int s) { enc.Encode(s, cdf); },
      [&](uint32_t v, int n) { enc.EncodeBits(v, n); });
}

inline std::vector<int32_t> DecodeCoefficients(RangeDecoder& dec, CoefContexts& ctx,
                                               BlockSize size) {
  const auto& scan = ScanOrder(size);
  const int count = static_cast<int>(scan.size());
  std::vector<int32_t> levels(count, 0);
  int pos = 0;
  while (pos < count) {
    const int run_sym = dec.Decode(ctx.run[CoefContexts::PositionClass(pos)]);
    if (run_sym == kEndOfBlock) break;
    int64_t run = run_sym;
    if (run_sym == kRunEscape) run = kRunEscape + int64_t{internal::ReadExpGolomb(dec)};
    if (pos + run >= count) Fail(ErrorCode::kSymbolOutOfRange, "zero run past block end");
    const int at = pos + static_cast<int>(run);
    int64_t mag = dec.Decode(ctx.level[CoefContexts::PositionClass(at)]) + 1;
    if (mag - 1 == kLevelEscape) mag += internal::ReadExpGolomb(dec);
    if (mag > INT32_MAX) Fail(ErrorCode::kSymbolOutOfRange, "level too large");
    const bool negative = dec.DecodeBits(1) != 0;
    levels[scan[at]] = static_cast<int32_t>(negative ? -mag : mag);
    pos = at + 1;
  }
  return levels;
}

// Estimated cost under frozen contexts, in 1/512 bit.
inline uint32_t CoefficientRateQ9(const CoefContexts& ctx, std::span<const int32_t> levels,
                                  BlockSize size) {
  uint32_t rate = 0;
  internal::EmitCoefficients(
      ctx, levels, size,
      [&](const CdfTable& cdf, int s) { rate += EstimateRateQ9(cdf, s); },
      [&](uint32_t, int n) { rate += static_cast<uint32_t>(n) * kRateOne; });
  return rate;
}

struct TransformResult {
  BlockSize size;
  std::vector<int32_t> levels;
  uint32_t rate_q9 = 0;
  std::vector<int32_t> recon_residual;

  double rate_bits() const { return RateToBits(rate_q9); }
};

inline TransformResult TransformQuantizeBlock(std::span<const int32_t> residual,
                                              BlockSize size, double step,
                                              const CoefContexts& ctx) {
  if (!(step > 0)) Fail(ErrorCode::kInvalidArgument, "quantizer step must be > 0");
  TransformResult r;
  r.size = size;
  r.levels = ForwardDct(residual, size);
  for (auto& c : r.levels) c = QuantizeCoefficient(c, step);
  r.rate_q9 = CoefficientRateQ9(ctx, r.levels, size);
  r.recon_residual = ReconstructResidual(r.levels, size, step);
  return r;
}

}  // namespace cfl

#endif  // CFL_TRANSFORM_H_
