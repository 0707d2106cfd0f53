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

#ifndef CFL_CFL_CORE_H_
#define CFL_CFL_CORE_H_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfl/error.h"
#include "cfl/frame.h"

namespace cfl {

// Block dimensions on the chroma grid.
struct BlockSize {
  int width = 0;
  int height = 0;

  int area() const { return width * height; }
  friend bool operator==(BlockSize, BlockSize) = default;
};

inline constexpr int kMaxBlockDim = 32;

inline bool IsPowerOfTwoDim(int n) {
  return n >= 1 && n <= kMaxBlockDim && std::has_single_bit(static_cast<unsigned>(n));
}

// Codec-level block sizes: powers of two from 4 to 32.
inline bool IsCodecBlockDim(int n) { return n >= 4 && IsPowerOfTwoDim(n); }

inline void CheckBlockSize(BlockSize size) {
  if (!IsPowerOfTwoDim(size.width) || !IsPowerOfTwoDim(size.height)) {
    Fail(ErrorCode::kInvalidBlockSize,
         std::to_string(size.width) + "x" + std::to_string(size.height));
  }
}

// Zero-mean luma of one chroma block in Q3 (1/8 sample) units.
class Q3AcBlock {
 public:
  Q3AcBlock() = default;
  Q3AcBlock(BlockSize size, std::vector<int16_t> values)
      : size_(size), values_(std::move(values)) {
    if (values_.size() != static_cast<size_t>(size.area())) {
      Fail(ErrorCode::kDimensionMismatch, "Q3 block value count");
    }
  }

  BlockSize size() const { return size_; }
  int width() const { return size_.width; }
  int height() const { return size_.height; }
  int16_t operator()(int u, int v) const { return values_[v * size_.width + u]; }
  std::span<const int16_t> values() const { return values_; }

 private:
  BlockSize size_;
  std::vector<int16_t> values_;
};

// Sum of the sx*sy reconstructed luma samples coinciding with chroma position
// (u, v) of the block whose top-left luma sample is (luma_x0, luma_y0).
// Positions past the plane edge are replicated.
inline uint32_t SubsampleSum(const Plane& luma, int luma_x0, int luma_y0,
                             ChromaFormat format, BlockSize block, int u,
                             int v) {
  if (u < 0 || v < 0 || u >= block.width || v >= block.height) {
    Fail(ErrorCode::kOutOfBounds, "chroma index outside block");
  }
  const int x = luma_x0 + u * format.sx;
  const int y = luma_y0 + v * format.sy;
  uint32_t sum = 0;
  for (int dy = 0; dy < format.sy; ++dy) {
    for (int dx = 0; dx < format.sx; ++dx) {
      sum += luma.Clamped(x + dx, y + dy);
    }
  }
  return sum;
}

// Intermediate values of the one-division AC extraction, kept at full width
// so callers can check them against the 16-bit storage claim.
struct Q3Intermediates {
  BlockSize size;
  std::vector<int32_t> scaled;  // subsample sum << (3 - log2(sx*sy))
  int64_t total = 0;            // sum of `scaled`
  int32_t average = 0;          // round(total / (M*N))
};

inline Q3Intermediates ScaledLumaSums(const Plane& luma, int luma_x0,
                                      int luma_y0, ChromaFormat format,
                                      BlockSize block) {
  CheckBlockSize(block);
  Q3Intermediates out;
  out.size = block;
  out.scaled.resize(block.area());
  const int shift = 3 - format.log2_area();
  for (int v = 0; v < block.height; ++v) {
    for (int u = 0; u < block.width; ++u) {
      const auto q = static_cast<int32_t>(
          SubsampleSum(luma, luma_x0, luma_y0, format, block, u, v) << shift);
      out.scaled[v * block.width + u] = q;
      out.total += q;
    }
  }
  const int log2_area = std::countr_zero(static_cast<unsigned>(block.area()));
  const int64_t half = int64_t{block.area()} >> 1;
  out.average = static_cast<int32_t>((out.total + half) >> log2_area);
  return out;
}

// Subsample, average and subtract in one pass: every sample is scaled to Q3
// by a shift and the only division is the (shifted) block average.
inline Q3AcBlock LumaToQ3Ac(const Plane& luma, int luma_x0, int luma_y0,
                            ChromaFormat format, BlockSize block) {
  const Q3Intermediates im =
      ScaledLumaSums(luma, luma_x0, luma_y0, format, block);
  std::vector<int16_t> values(im.scaled.size());
  for (size_t i = 0; i < values.size(); ++i) {
    values[i] = static_cast<int16_t>(im.scaled[i] - im.average);
  }
  return Q3AcBlock(block, std::move(values));
}

enum class NeighborAvailability { kNone, kAbove, kLeft, kBoth };

struct DcPrediction {
  uint16_t value = 0;
  NeighborAvailability availability = NeighborAvailability::kNone;
};

// Rounded mean of the available above/left neighbors; the midpoint when
// neither side exists.
inline DcPrediction DcPredict(std::optional<std::span<const uint16_t>> above,
                              std::optional<std::span<const uint16_t>> left,
                              BitDepth depth) {
  const bool has_above = above.has_value() && !above->empty();
  const bool has_left = left.has_value() && !left->empty();
  DcPrediction dc;
  if (!has_above && !has_left) {
    dc.value = static_cast<uint16_t>(depth.midpoint());
    return dc;
  }
  uint64_t sum = 0;
  uint64_t count = 0;
  if (has_above) {
    for (uint16_t s : *above) sum += s;
    count += above->size();
  }
  if (has_left) {
    for (uint16_t s : *left) sum += s;
    count += left->size();
  }
  dc.availability = has_above && has_left ? NeighborAvailability::kBoth
                    : has_above           ? NeighborAvailability::kAbove
                                          : NeighborAvailability::kLeft;
  dc.value = static_cast<uint16_t>(
      std::min<uint64_t>((sum + count / 2) / count, depth.max_value()));
  return dc;
}

// Signed rounding shift, ties away from zero.
inline int32_t RoundShiftSigned(int32_t value, int bits) {
  const int32_t half = 1 << (bits - 1);
  return value >= 0 ? (value + half) >> bits : -((-value + half) >> bits);
}

inline constexpr int kMaxAlphaQ3 = 16;

// Scaled-AC term added to DC: alpha (Q3) times AC (Q3) is Q6.
inline int32_t CflScaledAc(int alpha_q3, int16_t ac) {
  return RoundShiftSigned(alpha_q3 * static_cast<int32_t>(ac), 6);
}

inline Plane CflPredict(const Q3AcBlock& ac, int alpha_q3, DcPrediction dc,
                        BitDepth depth) {
  if (alpha_q3 < -kMaxAlphaQ3 || alpha_q3 > kMaxAlphaQ3) {
    Fail(ErrorCode::kAlphaOutOfRange, std::to_string(alpha_q3));
  }
  Plane pred(ac.width(), ac.height());
  for (int v = 0; v < ac.height(); ++v) {
    for (int u = 0; u < ac.width(); ++u) {
      const int32_t p = dc.value + CflScaledAc(alpha_q3, ac(u, v));
      pred(u, v) = static_cast<uint16_t>(std::clamp(p, 0, depth.max_value()));
    }
  }
  return pred;
}

}  // namespace cfl

#endif  // CFL_CFL_CORE_H_
