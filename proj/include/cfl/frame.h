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

#ifndef CFL_FRAME_H_
#define CFL_FRAME_H_

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cfl/error.h"

namespace cfl {

// Sample precision of a frame. Only 8, 10 and 12 bits are representable.
class BitDepth {
 public:
  constexpr BitDepth() = default;

  static BitDepth FromBits(int bits) {
    if (bits != 8 && bits != 10 && bits != 12) {
      Fail(ErrorCode::kUnsupportedFormat,
           "bit depth " + std::to_string(bits) + " not in {8, 10, 12}");
    }
    BitDepth depth;
    depth.bits_ = bits;
    return depth;
  }

  constexpr int bits() const { return bits_; }
  constexpr int max_value() const { return (1 << bits_) - 1; }
  constexpr int midpoint() const { return 1 << (bits_ - 1); }

  friend constexpr bool operator==(BitDepth, BitDepth) = default;

 private:
  int bits_ = 8;
};

// Chroma subsampling steps along x and y.
struct ChromaFormat {
  int sx = 2;
  int sy = 2;

  static constexpr ChromaFormat k420() { return {2, 2}; }
  static constexpr ChromaFormat k422() { return {2, 1}; }
  static constexpr ChromaFormat k440() { return {1, 2}; }
  static constexpr ChromaFormat k444() { return {1, 1}; }

  static ChromaFormat FromName(const std::string& name) {
    if (name == "420") return k420();
    if (name == "422") return k422();
    if (name == "440") return k440();
    if (name == "444") return k444();
    Fail(ErrorCode::kUnsupportedColorspace, "unknown chroma format " + name);
  }

  constexpr bool IsValid() const {
    return (sx == 1 || sx == 2) && (sy == 1 || sy == 2);
  }
  // log2(sx * sy), one of {0, 1, 2}.
  constexpr int log2_area() const { return (sx - 1) + (sy - 1); }
  constexpr int ChromaWidth(int luma_width) const {
    return (luma_width + sx - 1) / sx;
  }
  constexpr int ChromaHeight(int luma_height) const {
    return (luma_height + sy - 1) / sy;
  }

  std::string name() const {
    if (sx == 2 && sy == 2) return "420";
    if (sx == 2 && sy == 1) return "422";
    if (sx == 1 && sy == 2) return "440";
    return "444";
  }

  friend constexpr bool operator==(ChromaFormat, ChromaFormat) = default;
};

// A rectangular array of unsigned samples. Rows are `stride` samples apart.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height) : Plane(width, height, width) {}
  Plane(int width, int height, int stride)
      : width_(width), height_(height), stride_(stride) {
    if (width < 0 || height < 0 || stride < width) {
      Fail(ErrorCode::kInvalidArgument, "bad plane geometry");
    }
    samples_.assign(static_cast<size_t>(stride) * height, 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int stride() const { return stride_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  uint16_t operator()(int x, int y) const {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    return samples_[static_cast<size_t>(y) * stride_ + x];
  }
  uint16_t& operator()(int x, int y) {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    return samples_[static_cast<size_t>(y) * stride_ + x];
  }

  // Edge-replicated access for coordinates outside the plane.
  uint16_t Clamped(int x, int y) const {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return (*this)(x, y);
  }

  std::span<uint16_t> row(int y) {
    return {samples_.data() + static_cast<size_t>(y) * stride_,
            static_cast<size_t>(width_)};
  }
  std::span<const uint16_t> row(int y) const {
    return {samples_.data() + static_cast<size_t>(y) * stride_,
            static_cast<size_t>(width_)};
  }

  std::span<const uint16_t> samples() const { return samples_; }

  void Fill(uint16_t value) { std::fill(samples_.begin(), samples_.end(), value); }

  uint16_t MaxSample() const {
    uint16_t m = 0;
    for (int y = 0; y < height_; ++y) {
      for (uint16_t v : row(y)) m = std::max(m, v);
    }
    return m;
  }

  // Copy of the region [x0, x0 + w) x [y0, y0 + h), edge-replicated.
  Plane Crop(int x0, int y0, int w, int h) const {
    Plane out(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) out(x, y) = Clamped(x0 + x, y0 + y);
    }
    return out;
  }

  // Visible samples equal; stride may differ.
  friend bool operator==(const Plane& a, const Plane& b) {
    if (a.width_ != b.width_ || a.height_ != b.height_) return false;
    for (int y = 0; y < a.height_; ++y) {
      if (!std::equal(a.row(y).begin(), a.row(y).end(), b.row(y).begin())) {
        return false;
      }
    }
    return true;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int stride_ = 0;
  std::vector<uint16_t> samples_;
};

struct Frame {
  Plane y;
  Plane cb;
  Plane cr;
  ChromaFormat format;
  BitDepth depth;

  static Frame Create(int width, int height, ChromaFormat format,
                      BitDepth depth) {
    if (!format.IsValid()) {
      Fail(ErrorCode::kUnsupportedColorspace, "invalid subsampling");
    }
    Frame f;
    f.format = format;
    f.depth = depth;
    f.y = Plane(width, height);
    f.cb = Plane(format.ChromaWidth(width), format.ChromaHeight(height));
    f.cr = Plane(format.ChromaWidth(width), format.ChromaHeight(height));
    return f;
  }

  int width() const { return y.width(); }
  int height() const { return y.height(); }

  const Plane& plane(int index) const {
    return index == 0 ? y : (index == 1 ? cb : cr);
  }
  Plane& plane(int index) { return index == 0 ? y : (index == 1 ? cb : cr); }

  // Checks the chroma geometry and sample range invariants.
  void Validate() const {
    const int cw = format.ChromaWidth(y.width());
    const int ch = format.ChromaHeight(y.height());
    if (cb.width() != cw || cb.height() != ch || cr.width() != cw ||
        cr.height() != ch) {
      Fail(ErrorCode::kDimensionMismatch, "chroma geometry does not match format");
    }
    for (int p = 0; p < 3; ++p) {
      if (plane(p).MaxSample() > depth.max_value()) {
        Fail(ErrorCode::kInvalidArgument, "sample exceeds bit depth");
      }
    }
  }

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.format == b.format && a.depth == b.depth && a.y == b.y &&
           a.cb == b.cb && a.cr == b.cr;
  }
};

}  // namespace cfl

#endif  // CFL_FRAME_H_
