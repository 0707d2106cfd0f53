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

#include <cstdint>
#include <random>
#include <vector>

#include "cfl/fitting.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace cfl {
namespace {

using testing::RandInt;

// Normal equations solved by Cramer's rule in 128-bit integers.
struct OracleFit {
  __int128 alpha_num, beta_num, den;
};

OracleFit CramerFit(const std::vector<int>& l, const std::vector<int>& c) {
  __int128 n = static_cast<__int128>(l.size()), sl = 0, sc = 0, slc = 0, sll = 0;
  for (size_t i = 0; i < l.size(); ++i) {
    sl += l[i];
    sc += c[i];
    slc += static_cast<__int128>(l[i]) * c[i];
    sll += static_cast<__int128>(l[i]) * l[i];
  }
  return {n * slc - sl * sc, sc * sll - sl * slc, n * sll - sl * sl};
}

Rational FromInt128(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
  BigInt b = static_cast<uint64_t>(u >> 64);
  b <<= 64;
  b += static_cast<uint64_t>(u);
  return neg ? Rational(-b) : Rational(b);
}

std::vector<int> RandomSamples(std::mt19937_64& rng, size_t n, int max) {
  std::vector<int> v(n);
  for (auto& x : v) x = RandInt(rng, 0, max);
  return v;
}

Rational Sse(const std::vector<int>& l, const std::vector<int>& c, const Rational& a,
             const Rational& b) {
  Rational s = 0;
  for (size_t i = 0; i < l.size(); ++i) {
    const Rational e = a * l[i] + b - c[i];
    s += e * e;
  }
  return s;
}

TEST(FitLeastSquares, NoiselessLine) {
  std::vector<int> l = {1, 5, 9, 20}, c;
  for (int x : l) c.push_back(2 * x + 3);
  const FitResult f = FitLeastSquares<int, int>(l, c);
  EXPECT_EQ(f.alpha, 2);
  EXPECT_EQ(f.beta, 3);
  EXPECT_FALSE(f.degenerate);
}

TEST(FitLeastSquares, ConstantLumaIsDegenerate) {
  const std::vector<int> l = {7, 7, 7}, c = {1, 2, 4};
  const FitResult f = FitLeastSquares<int, int>(l, c);
  EXPECT_TRUE(f.degenerate);
  EXPECT_EQ(f.alpha, 0);
  EXPECT_EQ(f.beta, Rational(7, 3));
}

TEST(FitLeastSquares, Errors) {
  const std::vector<int> a = {1, 2}, b = {1};
  try {
    FitLeastSquares<int, int>(a, b);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(FitLeastSquares, MatchesCramerOracle) {
  std::mt19937_64 rng(21);
  for (int iter = 0; iter < 500; ++iter) {
    const size_t n = size_t{1} << RandInt(rng, 1, 10);
    const int max = (1 << testing::kAllDepths[iter % 3]) - 1;
    const auto l = RandomSamples(rng, n, max);
    const auto c = RandomSamples(rng, n, max);
    const FitResult f = FitLeastSquares<int, int>(l, c);
    const OracleFit o = CramerFit(l, c);
    if (o.den == 0) {
      EXPECT_TRUE(f.degenerate);
      continue;
    }
    ASSERT_EQ(f.alpha, FromInt128(o.alpha_num) / FromInt128(o.den));
    ASSERT_EQ(f.beta, FromInt128(o.beta_num) / FromInt128(o.den));
  }
}

TEST(FitLeastSquares, LocalOptimality) {
  std::mt19937_64 rng(22);
  const Rational eps(1, 1000);
  for (int iter = 0; iter < 100; ++iter) {
    const auto l = RandomSamples(rng, 16, 255);
    const auto c = RandomSamples(rng, 16, 255);
    const FitResult f = FitLeastSquares<int, int>(l, c);
    const Rational best = Sse(l, c, f.alpha, f.beta);
    EXPECT_GE(Sse(l, c, f.alpha + eps, f.beta), best);
    EXPECT_GE(Sse(l, c, f.alpha - eps, f.beta), best);
    EXPECT_GE(Sse(l, c, f.alpha, f.beta + eps), best);
    EXPECT_GE(Sse(l, c, f.alpha, f.beta - eps), best);
  }
}

TEST(FitLeastSquares, ShiftInvariantAlpha) {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    auto l = RandomSamples(rng, 32, 1023);
    const auto c = RandomSamples(rng, 32, 1023);
    const FitResult f = FitLeastSquares<int, int>(l, c);
    const int shift = RandInt(rng, -5000, 5000);
    for (auto& x : l) x += shift;
    EXPECT_EQ((FitLeastSquares<int, int>(l, c).alpha), f.alpha);
  }
}

TEST(FitZeroMean, TwoPointSlope) {
  const std::vector<int> ac = {-1, 1}, c = {10, 14};
  const FitResult f = FitZeroMean<int, int>(ac, c);
  EXPECT_EQ(f.alpha, 2);
  EXPECT_EQ(f.beta, 12);
}

TEST(FitZeroMean, ZeroAcIsDegenerate) {
  const std::vector<int> ac = {0, 0, 0, 0}, c = {1, 2, 3, 5};
  const FitResult f = FitZeroMean<int, int>(ac, c);
  EXPECT_TRUE(f.degenerate);
  EXPECT_EQ(f.beta, Rational(11, 4));
}

TEST(FitZeroMean, RejectsNonZeroMean) {
  const std::vector<int> ac = {1, 1}, c = {1, 2};
  EXPECT_THROW((FitZeroMean<int, int>(ac, c)), Error);
}

TEST(FitZeroMean, EquivalentToFullFit) {
  std::mt19937_64 rng(24);
  for (int iter = 0; iter < 500; ++iter) {
    const size_t n = size_t{1} << RandInt(rng, 2, 8);
    const auto l = RandomSamples(rng, n, 4095);
    const auto c = RandomSamples(rng, n, 4095);
    Rational mean = 0;
    for (int x : l) mean += x;
    mean /= static_cast<long long>(n);
    std::vector<Rational> ac;
    for (int x : l) ac.push_back(Rational(x) - mean);
    const FitResult full = FitLeastSquares<int, int>(l, c);
    const FitResult zm = FitZeroMean<Rational, int>(ac, c);
    ASSERT_EQ(full.alpha, zm.alpha);
    Rational cmean = 0;
    for (int x : c) cmean += x;
    ASSERT_EQ(zm.beta, cmean / static_cast<long long>(n));
    // Same prediction at every sample.
    const auto pred = ZeroMeanPredict<Rational>(zm, ac);
    for (size_t i = 0; i < n; ++i) ASSERT_EQ(pred[i], full.alpha * l[i] + full.beta);
  }
}

TEST(ImplicitFit, RecoversLineAndNeedsTwoPairs) {
  std::vector<int> l = {3, 8, 11}, c;
  for (int x : l) c.push_back(-x + 200);
  const FitResult f = ImplicitFit<int, int>(l, c);
  EXPECT_EQ(f.alpha, -1);
  EXPECT_EQ(f.beta, 200);
  const std::vector<int> one = {5};
  try {
    ImplicitFit<int, int>(one, one);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientNeighbors);
  }
}

TEST(ImplicitFit, MatchesOracle) {
  std::mt19937_64 rng(25);
  for (int iter = 0; iter < 200; ++iter) {
    const size_t n = static_cast<size_t>(RandInt(rng, 2, 64));
    const auto l = RandomSamples(rng, n, 255);
    const auto c = RandomSamples(rng, n, 255);
    const OracleFit o = CramerFit(l, c);
    if (o.den == 0) continue;
    EXPECT_EQ((ImplicitFit<int, int>(l, c).alpha), FromInt128(o.alpha_num) / FromInt128(o.den));
  }
}

TEST(QuantizeAlpha, Examples) {
  QuantizedAlpha q = QuantizeAlpha(Rational(99, 100));
  EXPECT_EQ(q.sign, CflSign::kPositive);
  EXPECT_EQ(q.magnitude_index, 7);
  q = QuantizeAlpha(Rational(-7, 2));
  EXPECT_EQ(q.sign, CflSign::kNegative);
  EXPECT_EQ(q.magnitude_index, 15);
  EXPECT_EQ(q.alpha_q3(), -16);
  EXPECT_EQ(QuantizeAlpha(Rational(1, 16)).sign, CflSign::kZero);
  EXPECT_EQ(QuantizeAlpha(Rational(3, 16)).alpha_q3(), 1);  // tie 1/8 vs 2/8
  EXPECT_EQ(QuantizeAlpha(Rational(-3, 16)).alpha_q3(), -1);
  EXPECT_EQ(QuantizeAlpha(Rational(0)).alpha_q3(), 0);
}

TEST(QuantizeAlpha, NearestGridPoint) {
  std::mt19937_64 rng(26);
  for (int iter = 0; iter < 2000; ++iter) {
    const Rational a(RandInt(rng, -3000, 3000), RandInt(rng, 1, 1000));
    const int q = QuantizeAlpha(a).alpha_q3();
    ASSERT_LE(std::abs(q), 16);
    const Rational err = abs(a - Rational(q, 8));
    for (int g = -16; g <= 16; ++g) {
      const Rational e = abs(a - Rational(g, 8));
      ASSERT_LE(err, e);
      if (e == err) {
        ASSERT_LE(std::abs(q), std::abs(g));
      }
    }
  }
}

}  // namespace
}  // namespace cfl
