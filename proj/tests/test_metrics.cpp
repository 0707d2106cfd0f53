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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cfl/bd_rate.h"
#include "cfl/color.h"
#include "cfl/metrics.h"
#include "cfl/synthetic.h"
#include "gtest/gtest.h"
#include "sharma_data.h"
#include "test_util.h"

namespace cfl {
namespace {

using testing::RandInt;

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

TEST(Psnr, KnownValues) {
  const BitDepth d8 = BitDepth::FromBits(8);
  Plane a(16, 16), b(16, 16);
  a.Fill(100);
  b.Fill(100);
  EXPECT_EQ(Psnr(a, b, d8), kMaxDb);
  b.Fill(101);
  EXPECT_NEAR(Psnr(a, b, d8), 48.1308036086791, 1e-9);  // 10 log10(255^2)
  b.Fill(110);
  EXPECT_NEAR(Psnr(a, b, d8), 28.1308036086791, 1e-9);
  EXPECT_NEAR(Psnr(a, b, BitDepth::FromBits(10)), 10 * std::log10(1023.0 * 1023 / 100), 1e-9);
}

TEST(Psnr, MatchesDirectFormula) {
  std::mt19937_64 rng(70);
  for (int iter = 0; iter < 50; ++iter) {
    const BitDepth d = BitDepth::FromBits(testing::kAllDepths[iter % 3]);
    const Plane a = testing::RandomPlane(rng, 9, 7, d);
    const Plane b = testing::RandomPlane(rng, 9, 7, d);
    double mse = 0;
    for (int y = 0; y < 7; ++y) {
      for (int x = 0; x < 9; ++x) mse += std::pow(a(x, y) - b(x, y), 2.0);
    }
    mse /= 63;
    EXPECT_NEAR(Psnr(a, b, d), 10 * std::log10(std::pow(d.max_value(), 2.0) / mse), 1e-9);
  }
  EXPECT_EQ(CodeOf([] { Psnr(Plane(2, 2), Plane(3, 2), BitDepth::FromBits(8)); }),
            ErrorCode::kDimensionMismatch);
}

TEST(Ciede2000, ReferencePairs) {
  for (const auto& p : testing::kCiede2000Pairs) {
    const LabColor c1{p.l1, p.a1, p.b1}, c2{p.l2, p.a2, p.b2};
    EXPECT_NEAR(DeltaE2000(c1, c2), p.de, 1e-4);
    EXPECT_NEAR(DeltaE2000(c2, c1), p.de, 1e-4);
  }
}

TEST(Ciede2000, LabOfWhiteAndBlack) {
  const LabColor w = RgbToLab({1, 1, 1});
  EXPECT_NEAR(w.L, 100, 1e-3);
  EXPECT_NEAR(w.a, 0, 1e-3);
  EXPECT_NEAR(w.b, 0, 1e-3);
  const LabColor k = RgbToLab({0, 0, 0});
  EXPECT_NEAR(k.L, 0, 1e-9);
  // sRGB red, a common published value.
  const LabColor r = RgbToLab({1, 0, 0});
  EXPECT_NEAR(r.L, 53.24, 0.02);
  EXPECT_NEAR(r.a, 80.09, 0.05);
  EXPECT_NEAR(r.b, 67.20, 0.05);
}

TEST(Ciede2000, FrameIdentitySymmetryAndErrors) {
  std::mt19937_64 rng(71);
  const Frame a = MakeAffineChromaFrame(24, 16, ChromaFormat::k420(), BitDepth::FromBits(8), 8, 1);
  Frame b = a;
  EXPECT_EQ(Ciede2000(a, b), 0.0);
  EXPECT_EQ(CiedeQualityDb(0), kMaxDb);
  for (int i = 0; i < 40; ++i) b.cb(RandInt(rng, 0, 11), RandInt(rng, 0, 7)) = RandInt(rng, 0, 255);
  const double ab = Ciede2000(a, b), ba = Ciede2000(b, a);
  EXPECT_GT(ab, 0);
  EXPECT_NEAR(ab, ba, 1e-12);
  EXPECT_NEAR(CiedeQualityDb(ab), 45 - 20 * std::log10(ab), 1e-12);
  const Frame c = MakeConstantFrame(24, 16, ChromaFormat::k444(), BitDepth::FromBits(8), 0, 0, 0);
  EXPECT_EQ(CodeOf([&] { Ciede2000(a, c); }), ErrorCode::kDimensionMismatch);
}

RdCurve Curve(std::vector<RdPoint> pts) { return RdCurve(std::move(pts)); }

const std::vector<RdPoint> kA = {{1000, 30.0}, {1800, 33.5}, {3500, 36.9}, {7200, 40.2}};
const std::vector<RdPoint> kB = {{900, 30.4}, {1650, 33.9}, {3300, 37.1}, {6500, 40.8}};
const std::vector<RdPoint> kC = {{400, 28.1}, {700, 31.0}, {1500, 35.2}, {2600, 37.9}, {5200, 41.3}};

TEST(BdRate, ScipyReferenceValues) {
  // Computed with scipy.interpolate.PchipInterpolator and numpy.polyfit.
  EXPECT_NEAR(BdRate(Curve(kA), Curve(kB)), -13.52353024296551, 1e-9);
  EXPECT_NEAR(BdRate(Curve(kA), Curve(kC)), -39.924054520853026, 1e-9);
  EXPECT_NEAR(BdRate(Curve(kC), Curve(kA)), 66.45597368868894, 1e-9);
  EXPECT_NEAR(BdRate(Curve(kA), Curve(kB), BdMethod::kCubicFit), -13.492435777312883, 1e-7);
  EXPECT_NEAR(BdRate(Curve(kA), Curve(kC), BdMethod::kCubicFit), -40.01142943815904, 1e-7);
  EXPECT_NEAR(BdRate(Curve(kC), Curve(kA), BdMethod::kCubicFit), 66.69842115493, 1e-7);
}

TEST(BdRate, IdenticalAndScaledCurves) {
  for (BdMethod m : {BdMethod::kPchip, BdMethod::kCubicFit}) {
    EXPECT_NEAR(BdRate(Curve(kA), Curve(kA), m), 0, 1e-9);
    std::vector<RdPoint> scaled = kA;
    for (auto& p : scaled) p.rate *= 1.1;
    EXPECT_NEAR(BdRate(Curve(kA), Curve(scaled), m), 10.0, 1e-6);
  }
}

TEST(BdRate, ReciprocalRelation) {
  // (1 + x/100)(1 + y/100) = 1 when the overlap is the same in both directions.
  for (BdMethod m : {BdMethod::kPchip, BdMethod::kCubicFit}) {
    const double x = BdRate(Curve(kA), Curve(kB), m) / 100;
    const double y = BdRate(Curve(kB), Curve(kA), m) / 100;
    EXPECT_NEAR((1 + x) * (1 + y), 1.0, 1e-9);
  }
}

// Independent monotone cubic: Fritsch-Butland harmonic slopes, three-point
// one-sided ends with sign and overshoot limiting.
double PchipEval(const std::vector<double>& x, const std::vector<double>& y, double t) {
  const size_t n = x.size();
  std::vector<double> h(n - 1), del(n - 1), d(n);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    del[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = del[0];
  } else {
    for (size_t i = 1; i + 1 < n; ++i) {
      if (del[i - 1] * del[i] <= 0) {
        d[i] = 0;
      } else {
        const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
        d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
      }
    }
    auto end = [](double h0, double h1, double m0, double m1) {
      double s = ((2 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
      if (s * m0 <= 0) return 0.0;
      if (m0 * m1 <= 0 && std::abs(s) > 3 * std::abs(m0)) return 3 * m0;
      return s;
    };
    d[0] = end(h[0], h[1], del[0], del[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
  }
  size_t i = std::upper_bound(x.begin(), x.end(), t) - x.begin();
  i = std::clamp<size_t>(i, 1, n - 1) - 1;
  const double s = (t - x[i]) / h[i];
  const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
  const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
  return h00 * y[i] + h10 * h[i] * d[i] + h01 * y[i + 1] + h11 * h[i] * d[i + 1];
}

double TrapezoidBd(const std::vector<RdPoint>& a, const std::vector<RdPoint>& b) {
  auto split = [](const std::vector<RdPoint>& c, std::vector<double>& q, std::vector<double>& r) {
    for (const auto& p : c) {
      q.push_back(p.quality);
      r.push_back(std::log(p.rate));
    }
  };
  std::vector<double> qa, ra, qb, rb;
  split(a, qa, ra);
  split(b, qb, rb);
  const double lo = std::max(qa.front(), qb.front()), hi = std::min(qa.back(), qb.back());
  const int n = 100000;
  double sum = 0;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + (hi - lo) * i / n;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    sum += w * (PchipEval(qb, rb, t) - PchipEval(qa, ra, t));
  }
  return (std::exp(sum / n) - 1) * 100;
}

TEST(BdRate, MatchesNumericalIntegration) {
  EXPECT_NEAR(TrapezoidBd(kA, kB), -13.52353024296551, 1e-4);
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> u(0, 1);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<RdPoint> a, b;
    double ra = 500 + 1000 * u(rng), rb = 500 + 1000 * u(rng);
    double qa = 28 + 2 * u(rng), qb = 28 + 2 * u(rng);
    const int n = 4 + iter % 3;
    for (int i = 0; i < n; ++i) {
      a.push_back({ra, qa});
      b.push_back({rb, qb});
      ra *= 1.3 + u(rng);
      rb *= 1.3 + u(rng);
      qa += 0.5 + 4 * u(rng);
      qb += 0.5 + 4 * u(rng);
    }
    double lo = std::max(a.front().quality, b.front().quality);
    double hi = std::min(a.back().quality, b.back().quality);
    if (hi - lo < 1) continue;
    const double want = TrapezoidBd(a, b);
    const double got = BdRate(Curve(a), Curve(b));
    // 0.01% relative on the rate ratio.
    ASSERT_NEAR((1 + got / 100) / (1 + want / 100), 1.0, 1e-4) << iter;
  }
}

TEST(BdRate, Errors) {
  EXPECT_EQ(CodeOf([] { Curve({{1000, 30}}); }), ErrorCode::kInvalidCurve);
  EXPECT_EQ(CodeOf([] { Curve({{1000, 30}, {1000, 31}}); }), ErrorCode::kInvalidCurve);
  EXPECT_EQ(CodeOf([] { Curve({{1000, 30}, {2000, 29}}); }), ErrorCode::kInvalidCurve);
  EXPECT_EQ(CodeOf([] { Curve({{0, 30}, {2000, 31}}); }), ErrorCode::kInvalidCurve);
  // Flat quality segments cannot be inverted.
  EXPECT_EQ(CodeOf([] { BdRate(Curve({{1000, 30}, {2000, 30}, {3000, 31}}), Curve(kA)); }),
            ErrorCode::kInvalidCurve);
  EXPECT_EQ(CodeOf([] { BdRate(Curve({{100, 10}, {200, 20}}), Curve({{100, 30}, {200, 40}})); }),
            ErrorCode::kNoOverlap);
}

}  // namespace
}  // namespace cfl
