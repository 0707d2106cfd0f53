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

#ifndef CFL_COLOR_H_
#define CFL_COLOR_H_

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "cfl/error.h"
#include "cfl/frame.h"

namespace cfl {

// 8-bit RGB source image held as three planes.
struct RgbImage {
  Plane r;
  Plane g;
  Plane b;

  int width() const { return r.width(); }
  int height() const { return r.height(); }
};

// Binary PPM (P6) with maxval <= 255. Comments are allowed in the header.
inline RgbImage ReadPpm(std::istream& in) {
  auto skip_space = [&in] {
    for (;;) {
      const int c = in.peek();
      if (c == '#') {
        while (in.good() && in.get() != '\n') {}
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        in.get();
      } else {
        return;
      }
    }
  };
  auto read_int = [&]() {
    skip_space();
    int v = 0;
    int digits = 0;
    while (in.peek() >= '0' && in.peek() <= '9' && digits < 9) {
      v = v * 10 + (in.get() - '0');
      ++digits;
    }
    if (digits == 0) Fail(ErrorCode::kMalformedHeader, "bad PPM header");
    return v;
  };
  char magic[2] = {};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '6') {
    Fail(ErrorCode::kMissingMagic, "not a binary PPM (P6)");
  }
  const int width = read_int();
  const int height = read_int();
  const int maxval = read_int();
  if (width <= 0 || height <= 0) {
    Fail(ErrorCode::kMalformedHeader, "bad PPM dimensions");
  }
  if (maxval <= 0 || maxval > 255) {
    Fail(ErrorCode::kUnsupportedFormat, "PPM maxval must be in [1, 255]");
  }
  const int sep = in.get();
  if (sep != ' ' && sep != '\n' && sep != '\t' && sep != '\r') {
    Fail(ErrorCode::kMalformedHeader, "bad PPM header terminator");
  }
  RgbImage img{Plane(width, height), Plane(width, height),
               Plane(width, height)};
  std::string buf(static_cast<size_t>(width) * 3, '\0');
  for (int y = 0; y < height; ++y) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
      Fail(ErrorCode::kTruncatedFrame, "PPM pixel data truncated");
    }
    for (int x = 0; x < width; ++x) {
      img.r(x, y) = static_cast<uint8_t>(buf[3 * x]);
      img.g(x, y) = static_cast<uint8_t>(buf[3 * x + 1]);
      img.b(x, y) = static_cast<uint8_t>(buf[3 * x + 2]);
    }
  }
  return img;
}

inline void WritePpm(std::ostream& out, const RgbImage& img) {
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::string buf;
  for (int y = 0; y < img.height(); ++y) {
    buf.clear();
    for (int x = 0; x < img.width(); ++x) {
      buf.push_back(static_cast<char>(img.r(x, y)));
      buf.push_back(static_cast<char>(img.g(x, y)));
      buf.push_back(static_cast<char>(img.b(x, y)));
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

// BT.601 full-range RGB -> YCbCr in 16-bit fixed point (the JFIF matrix).
// Rounds half up; each coefficient row of Cb and Cr sums to zero, so
// achromatic input maps exactly to 128.
inline Frame RgbToYcbcr(const Plane& r, const Plane& g, const Plane& b) {
  if (r.width() != g.width() || r.width() != b.width() ||
      r.height() != g.height() || r.height() != b.height()) {
    Fail(ErrorCode::kDimensionMismatch, "RGB planes differ in size");
  }
  Frame f = Frame::Create(r.width(), r.height(), ChromaFormat::k444(),
                          BitDepth::FromBits(8));
  for (int y = 0; y < r.height(); ++y) {
    for (int x = 0; x < r.width(); ++x) {
      const int32_t R = r(x, y), G = g(x, y), B = b(x, y);
      const int32_t luma = (19595 * R + 38470 * G + 7471 * B + 32768) >> 16;
      const int32_t cb = ((-11059 * R - 21709 * G + 32768 * B + 32768) >> 16) + 128;
      const int32_t cr = ((32768 * R - 27439 * G - 5329 * B + 32768) >> 16) + 128;
      f.y(x, y) = static_cast<uint16_t>(std::clamp(luma, 0, 255));
      f.cb(x, y) = static_cast<uint16_t>(std::clamp(cb, 0, 255));
      f.cr(x, y) = static_cast<uint16_t>(std::clamp(cr, 0, 255));
    }
  }
  return f;
}

inline Frame RgbToYcbcr(const RgbImage& img) {
  return RgbToYcbcr(img.r, img.g, img.b);
}

struct RgbSample {
  double r;
  double g;
  double b;
};

// Inverse BT.601 full-range transform, normalized to [0, 1] and clamped.
inline RgbSample YcbcrToRgb(int y, int cb, int cr, BitDepth depth) {
  const double scale = 1.0 / depth.max_value();
  const double mid = depth.midpoint();
  const double Y = y;
  const double Cb = cb - mid;
  const double Cr = cr - mid;
  auto norm = [scale](double v) { return std::clamp(v * scale, 0.0, 1.0); };
  return {norm(Y + 1.402 * Cr), norm(Y - 0.344136 * Cb - 0.714136 * Cr),
          norm(Y + 1.772 * Cb)};
}

// 4:4:4 -> `target`. Each output sample is the rounded mean of its sx*sy
// source samples; samples past the right/bottom edge are replicated.
inline Frame ChromaDownsample(const Frame& src, ChromaFormat target) {
  if (src.format != ChromaFormat::k444()) {
    Fail(ErrorCode::kUnsupportedFormat, "downsampling needs a 4:4:4 source");
  }
  if (!target.IsValid()) {
    Fail(ErrorCode::kUnsupportedColorspace, "invalid target format");
  }
  Frame out = Frame::Create(src.width(), src.height(), target, src.depth);
  out.y = src.y;
  const int n = target.sx * target.sy;
  for (int p = 1; p < 3; ++p) {
    const Plane& in = src.plane(p);
    Plane& o = out.plane(p);
    for (int v = 0; v < o.height(); ++v) {
      for (int u = 0; u < o.width(); ++u) {
        int sum = 0;
        for (int dy = 0; dy < target.sy; ++dy) {
          for (int dx = 0; dx < target.sx; ++dx) {
            sum += in.Clamped(u * target.sx + dx, v * target.sy + dy);
          }
        }
        o(u, v) = static_cast<uint16_t>((sum + n / 2) / n);
      }
    }
  }
  return out;
}

// Nearest-neighbor chroma upsampling to 4:4:4.
inline Frame ChromaUpsample(const Frame& src) {
  if (src.format == ChromaFormat::k444()) return src;
  Frame out = Frame::Create(src.width(), src.height(), ChromaFormat::k444(),
                            src.depth);
  out.y = src.y;
  for (int p = 1; p < 3; ++p) {
    for (int y = 0; y < src.height(); ++y) {
      for (int x = 0; x < src.width(); ++x) {
        out.plane(p)(x, y) =
            src.plane(p)(x / src.format.sx, y / src.format.sy);
      }
    }
  }
  return out;
}

}  // namespace cfl

#endif  // CFL_COLOR_H_
