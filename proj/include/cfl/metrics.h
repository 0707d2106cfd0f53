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

#ifndef CFL_METRICS_H_
#define CFL_METRICS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "cfl/color.h"
#include "cfl/error.h"
#include "cfl/frame.h"
#include "cfl/rd_search.h"

namespace cfl {

inline constexpr double kMaxDb = 100.0;

inline double Psnr(const Plane& a, const Plane& b, BitDepth depth) {
  const uint64_t sse = Sse(a, b);
  if (sse == 0) return kMaxDb;
  const double mse = static_cast<double>(sse) / (static_cast<double>(a.width()) * a.height());
  const double peak = depth.max_value();
  return std::min(kMaxDb, 10.0 * std::log10(peak * peak / mse));
}

struct LabColor {
  double L = 0;
  double a = 0;
  double b = 0;
};

// sRGB-encoded [0, 1] -> CIE 1976 L*a*b* (D65 white).
inline LabColor RgbToLab(const RgbSample& rgb) {
  auto lin = [](double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  const double r = lin(rgb.r), g = lin(rgb.g), b = lin(rgb.b);
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  constexpr double kDelta = 6.0 / 29.0;
  auto f = [](double t) {
    return t > kDelta * kDelta * kDelta ? std::cbrt(t)
                                        : t / (3 * kDelta * kDelta) + 4.0 / 29.0;
  };
  const double fx = f(x / 0.95047), fy = f(y / 1.0), fz = f(z / 1.08883);
  return {116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)};
}

// CIEDE2000 with kL = kC = kH = 1.
inline double DeltaE2000(const LabColor& c1, const LabColor& c2) {
  constexpr double kPi = std::numbers::pi;
  auto deg = [](double rad) { return rad * 180.0 / kPi; };
  auto rad = [](double d) { return d * kPi / 180.0; };
  const double pow25_7 = 6103515625.0;  // 25^7

  const double c1ab = std::hypot(c1.a, c1.b);
  const double c2ab = std::hypot(c2.a, c2.b);
  const double cbar = (c1ab + c2ab) / 2;
  const double cbar7 = std::pow(cbar, 7);
  const double g = 0.5 * (1 - std::sqrt(cbar7 / (cbar7 + pow25_7)));
  const double a1p = (1 + g) * c1.a, a2p = (1 + g) * c2.a;
  const double c1p = std::hypot(a1p, c1.b), c2p = std::hypot(a2p, c2.b);
  auto hue = [&](double b, double ap) {
    if (b == 0 && ap == 0) return 0.0;
    const double h = deg(std::atan2(b, ap));
    return h < 0 ? h + 360 : h;
  };
  const double h1p = hue(c1.b, a1p), h2p = hue(c2.b, a2p);

  const double dLp = c2.L - c1.L;
  const double dCp = c2p - c1p;
  double dhp = 0;
  if (c1p * c2p != 0) {
    dhp = h2p - h1p;
    if (dhp > 180) dhp -= 360;
    else if (dhp < -180) dhp += 360;
  }
  const double dHp = 2 * std::sqrt(c1p * c2p) * std::sin(rad(dhp / 2));

  const double Lbar = (c1.L + c2.L) / 2;
  const double cbarp = (c1p + c2p) / 2;
  double hbarp = h1p + h2p;
  if (c1p * c2p != 0) {
    if (std::abs(h1p - h2p) <= 180) hbarp /= 2;
    else if (hbarp < 360) hbarp = (hbarp + 360) / 2;
    else hbarp = (hbarp - 360) / 2;
  }
  const double t = 1 - 0.17 * std::cos(rad(hbarp - 30)) + 0.24 * std::cos(rad(2 * hbarp)) +
                   0.32 * std::cos(rad(3 * hbarp + 6)) - 0.20 * std::cos(rad(4 * hbarp - 63));
  const double dtheta = 30 * std::exp(-std::pow((hbarp - 275) / 25, 2));
  const double cbarp7 = std::pow(cbarp, 7);
  const double rc = 2 * std::sqrt(cbarp7 / (cbarp7 + pow25_7));
  const double l50 = (Lbar - 50) * (Lbar - 50);
  const double sl = 1 + 0.015 * l50 / std::sqrt(20 + l50);
  const double sc = 1 + 0.045 * cbarp;
  const double sh = 1 + 0.015 * cbarp * t;
  const double rt = -std::sin(rad(2 * dtheta)) * rc;
  const double tl = dLp / sl, tc = dCp / sc, th = dHp / sh;
  return std::sqrt(tl * tl + tc * tc + th * th + rt * tc * th);
}

inline LabColor PixelLab(const Frame& f444, int x, int y) {
  return RgbToLab(YcbcrToRgb(f444.y(x, y), f444.cb(x, y), f444.cr(x, y), f444.depth));
}

// Mean dE00 over all pixels; chroma is replicated up to 4:4:4 first.
inline double Ciede2000(const Frame& ref, const Frame& test) {
  if (ref.width() != test.width() || ref.height() != test.height() ||
      ref.format != test.format || ref.depth != test.depth) {
    Fail(ErrorCode::kDimensionMismatch, "CIEDE2000 frames differ in geometry");
  }
  const Frame a = ChromaUpsample(ref);
  const Frame b = ChromaUpsample(test);
  double total = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (a.y(x, y) == b.y(x, y) && a.cb(x, y) == b.cb(x, y) && a.cr(x, y) == b.cr(x, y)) {
        continue;
      }
      total += DeltaE2000(PixelLab(a, x, y), PixelLab(b, x, y));
    }
  }
  return total / (static_cast<double>(a.width()) * a.height());
}

// Quality axis used for BD-rate on CIEDE2000: higher is better.
inline double CiedeQualityDb(double mean_delta_e) {
  if (mean_delta_e <= 0) return kMaxDb;
  return std::min(kMaxDb, 45.0 - 20.0 * std::log10(mean_delta_e));
}

}  // namespace cfl

#endif  // CFL_METRICS_H_
