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

#ifndef CFL_SYNTHETIC_H_
#define CFL_SYNTHETIC_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "cfl/color.h"
#include "cfl/frame.h"

namespace cfl {

namespace internal {

// Uniform double in [lo, hi) from the raw engine output, so results do not
// depend on the standard library's distribution implementations.
inline double UniformReal(std::mt19937_64& rng, double lo, double hi) {
  return lo + static_cast<double>(rng() >> 11) * 0x1.0p-53 * (hi - lo);
}

inline uint16_t ClampSample(double v, BitDepth depth) {
  return static_cast<uint16_t>(std::clamp(std::lround(v), 0L, long{depth.max_value()}));
}

}  // namespace internal

inline Frame MakeConstantFrame(int width, int height, ChromaFormat format, BitDepth depth,
                               uint16_t y, uint16_t cb, uint16_t cr) {
  Frame f = Frame::Create(width, height, format, depth);
  f.y.Fill(y);
  f.cb.Fill(cb);
  f.cr.Fill(cr);
  return f;
}

// Every plane ramps left to right over the full sample range.
inline Frame MakeHorizontalGradient(int width, int height, ChromaFormat format,
                                    BitDepth depth) {
  Frame f = Frame::Create(width, height, format, depth);
  for (int p = 0; p < 3; ++p) {
    Plane& pl = f.plane(p);
    for (int y = 0; y < pl.height(); ++y) {
      for (int x = 0; x < pl.width(); ++x) {
        pl(x, y) = static_cast<uint16_t>(
            (static_cast<int64_t>(x) * depth.max_value() + pl.width() / 2) /
            std::max(1, pl.width() - 1));
      }
    }
  }
  return f;
}

// Textured luma (ramp + random sinusoids + noise); each chroma plane is
// alpha_b * luma + beta_b inside every (block * sx) x (block * sy) luma
// region, built at 4:4:4 and then box-downsampled.
inline Frame MakeAffineChromaFrame(int width, int height, ChromaFormat format,
                                   BitDepth depth, int block, uint64_t seed) {
  std::mt19937_64 rng(seed);
  using internal::UniformReal;
  const double range = depth.max_value();
  Frame f = Frame::Create(width, height, ChromaFormat::k444(), depth);
  const double gx = UniformReal(rng, -0.3, 0.3), gy = UniformReal(rng, -0.3, 0.3);
  struct Wave {
    double fx, fy, phase, amp;
  };
  Wave waves[4];
  for (auto& w : waves) {
    w = {UniformReal(rng, 0.01, 0.25), UniformReal(rng, 0.01, 0.25),
         UniformReal(rng, 0, 2 * std::numbers::pi), UniformReal(rng, 0.04, 0.12)};
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 0.5 + gx * (x / static_cast<double>(width) - 0.5) +
                 gy * (y / static_cast<double>(height) - 0.5);
      for (const auto& w : waves) v += w.amp * std::sin(w.fx * x + w.fy * y + w.phase);
      v += UniformReal(rng, -0.02, 0.02);
      f.y(x, y) = internal::ClampSample(v * range, depth);
    }
  }
  const int bw = block * format.sx, bh = block * format.sy;
  for (int by = 0; by < height; by += bh) {
    for (int bx = 0; bx < width; bx += bw) {
      const int x1 = std::min(width, bx + bw), y1 = std::min(height, by + bh);
      double mean = 0;
      for (int y = by; y < y1; ++y) {
        for (int x = bx; x < x1; ++x) mean += f.y(x, y);
      }
      mean /= (x1 - bx) * (y1 - by);
      for (int p = 1; p < 3; ++p) {
        const double alpha = UniformReal(rng, -1.5, 1.5);
        const double center = range * UniformReal(rng, 0.3, 0.7);
        for (int y = by; y < y1; ++y) {
          for (int x = bx; x < x1; ++x) {
            f.plane(p)(x, y) = internal::ClampSample(center + alpha * (f.y(x, y) - mean), depth);
          }
        }
      }
    }
  }
  return format == ChromaFormat::k444() ? f : ChromaDownsample(f, format);
}

}  // namespace cfl

#endif  // CFL_SYNTHETIC_H_
