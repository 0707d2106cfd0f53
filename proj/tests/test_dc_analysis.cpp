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

#include "cfl/dc_analysis.h"
#include "cfl/synthetic.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace cfl {
namespace {

TEST(DcAnalysis, ConstantFrameHasNoError) {
  const Frame f = MakeConstantFrame(64, 64, ChromaFormat::k444(), BitDepth::FromBits(8), 1, 2, 3);
  const auto stats = DcErrorAnalysis({f});
  ASSERT_EQ(stats.size(), 4u);
  for (const auto& s : stats) {
    EXPECT_EQ(s.median, 0);
    EXPECT_EQ(s.hi_whisker, 0);
    // Two planes of (64/size)^2 blocks, corner excluded.
    EXPECT_EQ(s.count, 2u * ((64 / s.size) * (64 / s.size) - 1));
  }
}

// Straight from the definition: block mean against the rounded mean of the
// row above and the column to the left.
std::vector<double> OracleErrors(const Frame& f, int n) {
  std::vector<double> out;
  for (int p = 1; p < 3; ++p) {
    const Plane& c = f.plane(p);
    for (int by = 0; by < c.height() / n; ++by) {
      for (int bx = 0; bx < c.width() / n; ++bx) {
        if (bx == 0 && by == 0) continue;
        long sum = 0, nsum = 0, cnt = 0;
        for (int y = 0; y < n; ++y) {
          for (int x = 0; x < n; ++x) sum += c(bx * n + x, by * n + y);
        }
        for (int i = 0; i < n; ++i) {
          if (by > 0) nsum += c(bx * n + i, by * n - 1), ++cnt;
          if (bx > 0) nsum += c(bx * n - 1, by * n + i), ++cnt;
        }
        const long pred = (2 * nsum + cnt) / (2 * cnt);
        const double e = static_cast<double>(sum) / (n * n) - pred;
        out.push_back(e * e);
      }
    }
  }
  return out;
}

TEST(DcAnalysis, MatchesOracle) {
  std::mt19937_64 rng(80);
  for (int iter = 0; iter < 6; ++iter) {
    const ChromaFormat fmt = testing::kAllFormats[iter % 4];
    Frame f = iter % 2 ? MakeHorizontalGradient(70, 50, fmt, BitDepth::FromBits(10))
                       : testing::RandomFrame(rng, 70, 50, fmt, BitDepth::FromBits(8));
    for (int n : {4, 8, 16}) {
      auto got = DcErrors(f, n);
      auto want = OracleErrors(f, n);
      ASSERT_EQ(got, want);
      std::sort(want.begin(), want.end());
      const auto stats = DcErrorAnalysis({f}, {n});
      ASSERT_EQ(stats.size(), 1u);
      // Median by the textbook rule on the sorted sample.
      const size_t m = want.size();
      const double med = m % 2 ? want[m / 2] : (want[m / 2 - 1] + want[m / 2]) / 2;
      EXPECT_DOUBLE_EQ(stats[0].median, med);
      EXPECT_LE(stats[0].q1, stats[0].median);
      EXPECT_LE(stats[0].median, stats[0].q3);
      EXPECT_LE(stats[0].lo_whisker, stats[0].q1);
      EXPECT_GE(stats[0].hi_whisker, stats[0].q3);
      EXPECT_LE(stats[0].hi_whisker, want.back());
    }
  }
}

TEST(DcAnalysis, QuantileInterpolates) {
  const std::vector<double> v = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(Quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(Quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(Quantile(v, 0.75), 3.25);
  // Outlier 100 lies beyond q3 + 1.5 IQR.
  const DcErrorStats s = Summarize(4, {1, 2, 3, 4, 100});
  EXPECT_EQ(s.hi_whisker, 4);
  EXPECT_EQ(s.lo_whisker, 1);
}

TEST(DcAnalysis, ErrorsAndCsv) {
  try {
    DcErrorAnalysis({});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
  const Frame f = MakeConstantFrame(16, 16, ChromaFormat::k444(), BitDepth::FromBits(8), 0, 0, 0);
  try {
    DcErrorAnalysis({f}, {6});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidBlockSize);
  }
  // 32 has no whole block in a 16x16 plane.
  const auto stats = DcErrorAnalysis({f}, {8, 32});
  ASSERT_EQ(stats.size(), 1u);
  EXPECT_EQ(DcErrorCsv(stats),
            "size,q1,median,q3,lo_whisker,hi_whisker\n"
            "8,0.000000,0.000000,0.000000,0.000000,0.000000\n");
}

}  // namespace
}  // namespace cfl
