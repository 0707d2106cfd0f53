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

#ifndef CFL_RD_SEARCH_H_
#define CFL_RD_SEARCH_H_

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <tuple>

#include "cfl/cdf.h"
#include "cfl/cfl_core.h"
#include "cfl/cfl_params.h"
#include "cfl/cfl_signaling.h"
#include "cfl/error.h"
#include "cfl/frame.h"

namespace cfl {

// Non-negative rational rate/distortion weight (SSE per bit).
class Lambda {
 public:
  static constexpr int64_t kDefaultDenominator = 1 << 16;

  Lambda() = default;

  static Lambda FromRational(int64_t num, int64_t den) {
    if (num < 0 || den <= 0) Fail(ErrorCode::kInvalidArgument, "lambda must be >= 0");
    Lambda l;
    l.num_ = num;
    l.den_ = den;
    return l;
  }

  // Rounded to the nearest 1/65536.
  static Lambda FromDouble(double value) {
    if (!(value >= 0) || !std::isfinite(value)) {
      Fail(ErrorCode::kInvalidArgument, "lambda must be finite and >= 0");
    }
    return FromRational(std::llround(value * kDefaultDenominator),
                        kDefaultDenominator);
  }

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

 private:
  int64_t num_ = 0;
  int64_t den_ = 1;
};

enum class ChromaMode { kDc = 0, kCfl = 1 };

// kFullGrid enumerates every (joint sign, magnitude, magnitude) tuple;
// kPruned searches each plane separately per sign, which is exact because
// distortion and magnitude rate are additive across planes.
enum class SearchSpace { kFullGrid, kPruned };

struct RdConfig {
  Lambda lambda;
  SearchSpace search_space = SearchSpace::kPruned;
};

// Frozen copy of the CDFs the chroma mode and CfL parameters are coded with.
struct RdRateModel {
  CdfTable mode{2};
  CflContexts cfl;
};

struct RdDecision {
  ChromaMode mode = ChromaMode::kDc;
  CflParams params;  // {0, 0} in DC mode
  uint64_t distortion = 0;
  uint32_t rate_q9 = 0;
  double cost = 0;

  double rate_bits() const { return RateToBits(rate_q9); }
};

inline uint64_t Sse(const Plane& a, const Plane& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    Fail(ErrorCode::kDimensionMismatch, "SSE operands differ in size");
  }
  uint64_t sum = 0;
  for (int y = 0; y < a.height(); ++y) {
    const auto ra = a.row(y);
    const auto rb = b.row(y);
    for (int x = 0; x < a.width(); ++x) {
      const int64_t d = static_cast<int64_t>(ra[x]) - rb[x];
      sum += static_cast<uint64_t>(d * d);
    }
  }
  return sum;
}

struct Q3Distortion {
  uint64_t sse = 0;
  // False when some predicted sample would be clamped; `sse` then ignores
  // the clamp.
  bool exact = true;
};

// SSE of CfL(alpha) against `ref` computed from the scaled AC term and
// ref - dc, without building the prediction block.
inline Q3Distortion DistortionInQ3Domain(const Q3AcBlock& ac, int alpha_q3,
                                         const Plane& ref, DcPrediction dc,
                                         BitDepth depth) {
  if (ac.width() != ref.width() || ac.height() != ref.height()) {
    Fail(ErrorCode::kDimensionMismatch, "AC block and reference differ in size");
  }
  Q3Distortion out;
  const int32_t lo = -static_cast<int32_t>(dc.value);
  const int32_t hi = depth.max_value() - static_cast<int32_t>(dc.value);
  for (int v = 0; v < ac.height(); ++v) {
    const auto row = ref.row(v);
    for (int u = 0; u < ac.width(); ++u) {
      const int32_t term = CflScaledAc(alpha_q3, ac(u, v));
      if (term < lo || term > hi) out.exact = false;
      const int64_t d = term - (static_cast<int32_t>(row[u]) - dc.value);
      out.sse += static_cast<uint64_t>(d * d);
    }
  }
  return out;
}

inline uint64_t CflDistortion(const Q3AcBlock& ac, int alpha_q3, const Plane& ref,
                              DcPrediction dc, BitDepth depth) {
  const Q3Distortion fast = DistortionInQ3Domain(ac, alpha_q3, ref, dc, depth);
  if (fast.exact) return fast.sse;
  return Sse(CflPredict(ac, alpha_q3, dc, depth), ref);
}

inline constexpr int kNumAlphaValues = 2 * kMaxAlphaQ3 + 1;

// Per-alpha distortion of one chroma plane plus any rate that depends on the
// plane's alpha alone (residual bits when ranking with the full rate).
struct PlaneCandidateCosts {
  std::array<uint64_t, kNumAlphaValues> distortion{};
  std::array<uint32_t, kNumAlphaValues> extra_rate_q9{};

  uint64_t D(int alpha_q3) const { return distortion[alpha_q3 + kMaxAlphaQ3]; }
  uint32_t R(int alpha_q3) const { return extra_rate_q9[alpha_q3 + kMaxAlphaQ3]; }
};

inline PlaneCandidateCosts PredictionCosts(const Q3AcBlock& ac, const Plane& ref,
                                           DcPrediction dc, BitDepth depth) {
  PlaneCandidateCosts costs;
  for (int a = -kMaxAlphaQ3; a <= kMaxAlphaQ3; ++a) {
    costs.distortion[a + kMaxAlphaQ3] = CflDistortion(ac, a, ref, dc, depth);
  }
  return costs;
}

namespace internal {

using WideCost = unsigned __int128;

inline WideCost ScaledCost(uint64_t distortion, uint64_t rate_q9, const Lambda& lambda) {
  return static_cast<WideCost>(distortion) * static_cast<uint64_t>(lambda.den()) *
             kRateOne +
         static_cast<WideCost>(static_cast<uint64_t>(lambda.num())) * rate_q9;
}

// Total order used for every RD comparison: cost, then DC before CfL, then
// smaller total |alpha|, then the alphas themselves.
struct CandidateKey {
  WideCost cost;
  int is_cfl;
  int abs_sum;
  int alpha_cb;
  int alpha_cr;

  friend bool operator<(const CandidateKey& a, const CandidateKey& b) {
    return std::tie(a.cost, a.is_cfl, a.abs_sum, a.alpha_cb, a.alpha_cr) <
           std::tie(b.cost, b.is_cfl, b.abs_sum, b.alpha_cb, b.alpha_cr);
  }
};

struct Evaluated {
  CandidateKey key;
  RdDecision decision;
};

inline Evaluated EvaluateDc(const PlaneCandidateCosts& cb, const PlaneCandidateCosts& cr,
                            const RdConfig& cfg, const RdRateModel& model) {
  RdDecision d;
  d.mode = ChromaMode::kDc;
  d.distortion = cb.D(0) + cr.D(0);
  d.rate_q9 = EstimateRateQ9(model.mode, 0) + cb.R(0) + cr.R(0);
  d.cost = static_cast<double>(d.distortion) + cfg.lambda.value() * d.rate_bits();
  return {{ScaledCost(d.distortion, d.rate_q9, cfg.lambda), 0, 0, 0, 0}, d};
}

inline Evaluated EvaluateCfl(const PlaneCandidateCosts& cb, const PlaneCandidateCosts& cr,
                             const CflParams& params, const RdConfig& cfg,
                             const RdRateModel& model) {
  RdDecision d;
  d.mode = ChromaMode::kCfl;
  d.params = params;
  d.distortion = cb.D(params.alpha_cb) + cr.D(params.alpha_cr);
  d.rate_q9 = EstimateRateQ9(model.mode, 1) + CflParamsRateQ9(model.cfl, params) +
              cb.R(params.alpha_cb) + cr.R(params.alpha_cr);
  d.cost = static_cast<double>(d.distortion) + cfg.lambda.value() * d.rate_bits();
  return {{ScaledCost(d.distortion, d.rate_q9, cfg.lambda), 1,
           std::abs(params.alpha_cb) + std::abs(params.alpha_cr), params.alpha_cb,
           params.alpha_cr},
          d};
}

// Best alpha of one plane restricted to `sign`: minimum of plane-local cost,
// ties to the smaller magnitude.
inline int BestAlphaForSign(const PlaneCandidateCosts& costs, const CflContexts& ctx,
                            int chroma_plane, CflSign sign, const Lambda& lambda) {
  if (sign == CflSign::kZero) return 0;
  const int dir = sign == CflSign::kNegative ? -1 : 1;
  int best = 0;
  WideCost best_cost = 0;
  for (int mag = 1; mag <= kMaxAlphaQ3; ++mag) {
    const int a = dir * mag;
    const WideCost c = ScaledCost(
        costs.D(a), uint64_t{CflMagnitudeRateQ9(ctx, chroma_plane, a)} + costs.R(a), lambda);
    if (best == 0 || c < best_cost) {
      best = a;
      best_cost = c;
    }
  }
  return best;
}

}  // namespace internal

struct RdSearchResult {
  RdDecision best;      // over DC and every CfL candidate
  RdDecision best_cfl;  // over CfL candidates only
};

// Minimizes D + lambda * R over DC and every reachable CfL parameter pair.
inline RdSearchResult RdSelectFromCosts(const PlaneCandidateCosts& cb,
                                        const PlaneCandidateCosts& cr,
                                        const RdConfig& cfg, const RdRateModel& model) {
  using internal::Evaluated;
  const Evaluated dc = internal::EvaluateDc(cb, cr, cfg, model);
  bool have_cfl = false;
  Evaluated best_cfl{};
  auto consider = [&](const CflParams& params) {
    const Evaluated e = internal::EvaluateCfl(cb, cr, params, cfg, model);
    if (!have_cfl || e.key < best_cfl.key) {
      best_cfl = e;
      have_cfl = true;
    }
  };
  if (cfg.search_space == SearchSpace::kFullGrid) {
    for (int js = 0; js < kNumJointSigns; ++js) {
      for (int m_cb = 0; m_cb < kNumAlphaMagnitudes; ++m_cb) {
        for (int m_cr = 0; m_cr < kNumAlphaMagnitudes; ++m_cr) {
          consider(CflParams::FromCoded(js, m_cb, m_cr));
        }
      }
    }
  } else {
    std::array<std::array<int, 3>, 2> best_alpha{};
    for (int s = 0; s < 3; ++s) {
      best_alpha[0][s] = internal::BestAlphaForSign(cb, model.cfl, 0,
                                                    static_cast<CflSign>(s), cfg.lambda);
      best_alpha[1][s] = internal::BestAlphaForSign(cr, model.cfl, 1,
                                                    static_cast<CflSign>(s), cfg.lambda);
    }
    for (int js = 0; js < kNumJointSigns; ++js) {
      consider({best_alpha[0][static_cast<int>(CflParams::SignCb(js))],
                best_alpha[1][static_cast<int>(CflParams::SignCr(js))]});
    }
  }
  RdSearchResult result;
  result.best_cfl = best_cfl.decision;
  result.best = best_cfl.key < dc.key ? best_cfl.decision : dc.decision;
  return result;
}

// RD selection from prediction distortion alone (parameter-only rate).
inline RdSearchResult RdSelect(const Q3AcBlock& ac_cb, const Q3AcBlock& ac_cr,
                               const Plane& ref_cb, const Plane& ref_cr,
                               DcPrediction dc_cb, DcPrediction dc_cr, BitDepth depth,
                               const RdConfig& cfg, const RdRateModel& model) {
  return RdSelectFromCosts(PredictionCosts(ac_cb, ref_cb, dc_cb, depth),
                           PredictionCosts(ac_cr, ref_cr, dc_cr, depth), cfg, model);
}

}  // namespace cfl

#endif  // CFL_RD_SEARCH_H_
