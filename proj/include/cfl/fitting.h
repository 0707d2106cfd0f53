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

#ifndef CFL_FITTING_H_
#define CFL_FITTING_H_

#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cfl/cfl_core.h"
#include "cfl/cfl_params.h"
#include "cfl/error.h"

namespace cfl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double ToDouble(const Rational& r) { return r.convert_to<double>(); }

// Linear model chroma = alpha * luma + beta, in exact arithmetic.
struct FitResult {
  Rational alpha;
  Rational beta;
  // The regression denominator is zero (constant luma); alpha is 0 and beta
  // is the chroma mean.
  bool degenerate = false;
};

namespace internal {

template <typename T>
inline constexpr bool kExactIntegral = std::is_integral_v<T>;

template <typename T, typename U>
using FitAccumulator =
    std::conditional_t<kExactIntegral<T> && kExactIntegral<U>, BigInt, Rational>;

template <typename Acc, typename T>
Acc Lift(const T& value) {
  if constexpr (std::is_integral_v<T>) {
    return Acc(static_cast<long long>(value));
  } else {
    return Acc(value);
  }
}

template <typename Acc>
Rational MakeRational(const Acc& num, const Acc& den) {
  if constexpr (std::is_same_v<Acc, BigInt>) {
    return Rational(num, den);
  } else {
    return num / den;
  }
}

}  // namespace internal

// Least-squares fit of chroma on luma over all sample pairs.
template <typename T, typename U>
FitResult FitLeastSquares(std::span<const T> luma, std::span<const U> chroma) {
  if (luma.size() != chroma.size()) {
    Fail(ErrorCode::kDimensionMismatch, "luma and chroma sample counts differ");
  }
  if (luma.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "least squares needs at least 2 samples");
  }
  using Acc = internal::FitAccumulator<T, U>;
  Acc sum_l = 0, sum_c = 0, sum_lc = 0, sum_ll = 0;
  for (size_t i = 0; i < luma.size(); ++i) {
    const Acc l = internal::Lift<Acc>(luma[i]);
    const Acc c = internal::Lift<Acc>(chroma[i]);
    sum_l += l;
    sum_c += c;
    sum_lc += l * c;
    sum_ll += l * l;
  }
  const Acc n = static_cast<long long>(luma.size());
  const Acc den = n * sum_ll - sum_l * sum_l;
  FitResult fit;
  if (den == 0) {
    fit.degenerate = true;
    fit.alpha = 0;
    fit.beta = internal::MakeRational<Acc>(sum_c, n);
    return fit;
  }
  fit.alpha = internal::MakeRational<Acc>(n * sum_lc - sum_l * sum_c, den);
  fit.beta = (Rational(sum_c) - fit.alpha * Rational(sum_l)) / Rational(n);
  return fit;
}

// Fit against zero-mean luma: alpha = sum(ac * C) / sum(ac^2) and beta is the
// chroma mean. `ac` must sum to exactly zero.
template <typename T, typename U>
FitResult FitZeroMean(std::span<const T> ac, std::span<const U> chroma) {
  if (ac.size() != chroma.size()) {
    Fail(ErrorCode::kDimensionMismatch, "ac and chroma sample counts differ");
  }
  if (ac.empty()) Fail(ErrorCode::kInvalidArgument, "empty block");
  using Acc = internal::FitAccumulator<T, U>;
  Acc sum_a = 0, sum_c = 0, sum_ac = 0, sum_aa = 0;
  for (size_t i = 0; i < ac.size(); ++i) {
    const Acc a = internal::Lift<Acc>(ac[i]);
    const Acc c = internal::Lift<Acc>(chroma[i]);
    sum_a += a;
    sum_c += c;
    sum_ac += a * c;
    sum_aa += a * a;
  }
  if (sum_a != 0) {
    Fail(ErrorCode::kInvalidArgument, "luma input is not zero-mean");
  }
  FitResult fit;
  fit.beta = internal::MakeRational<Acc>(sum_c, Acc(static_cast<long long>(ac.size())));
  if (sum_aa == 0) {
    fit.degenerate = true;
    fit.alpha = 0;
    return fit;
  }
  fit.alpha = internal::MakeRational<Acc>(sum_ac, sum_aa);
  return fit;
}

// Zero-mean prediction alpha * ac + beta, elementwise.
template <typename T>
std::vector<Rational> ZeroMeanPredict(const FitResult& fit, std::span<const T> ac) {
  std::vector<Rational> out;
  out.reserve(ac.size());
  for (const T& a : ac) {
    out.push_back(fit.alpha * internal::Lift<Rational>(a) + fit.beta);
  }
  return out;
}

// Decoder-side fit over already reconstructed neighbor pairs.
template <typename T, typename U>
FitResult ImplicitFit(std::span<const T> neighbor_luma,
                      std::span<const U> neighbor_chroma) {
  if (neighbor_luma.size() != neighbor_chroma.size()) {
    Fail(ErrorCode::kDimensionMismatch, "neighbor counts differ");
  }
  if (neighbor_luma.size() < 2) {
    Fail(ErrorCode::kInsufficientNeighbors, "need at least two neighbor pairs");
  }
  return FitLeastSquares(neighbor_luma, neighbor_chroma);
}

// Nearest point of the signaled alpha grid {0, +-1/8, ..., +-2}.
struct QuantizedAlpha {
  CflSign sign = CflSign::kZero;
  int magnitude_index = -1;  // alpha = (index + 1) / 8; -1 when sign is zero

  int alpha_q3() const { return CflParams::SignedAlpha(sign, magnitude_index); }
};

// Ties round toward the smaller magnitude; |alpha| > 2 saturates.
inline QuantizedAlpha QuantizeAlpha(const Rational& alpha) {
  const Rational x = abs(alpha) * 8;
  const BigInt whole = numerator(x) / denominator(x);
  const Rational frac = x - Rational(whole);
  BigInt k = frac > Rational(1, 2) ? whole + 1 : whole;
  if (k > kMaxAlphaQ3) k = kMaxAlphaQ3;
  QuantizedAlpha q;
  if (k == 0) return q;
  q.sign = alpha < 0 ? CflSign::kNegative : CflSign::kPositive;
  q.magnitude_index = static_cast<int>(k) - 1;
  return q;
}

}  // namespace cfl

#endif  // CFL_FITTING_H_
