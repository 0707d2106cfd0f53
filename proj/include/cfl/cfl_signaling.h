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

#ifndef CFL_CFL_SIGNALING_H_
#define CFL_CFL_SIGNALING_H_

#include <array>
#include <cstdint>

#include "cfl/cdf.h"
#include "cfl/cfl_params.h"
#include "cfl/range_coder.h"

namespace cfl {

// Adaptive contexts for CfL parameters. Each plane's magnitude CDF is chosen
// by that plane's sign (negative or positive).
struct CflContexts {
  CdfTable joint_sign{kNumJointSigns};
  std::array<std::array<CdfTable, 2>, 2> magnitude{
      {{CdfTable(kNumAlphaMagnitudes), CdfTable(kNumAlphaMagnitudes)},
       {CdfTable(kNumAlphaMagnitudes), CdfTable(kNumAlphaMagnitudes)}}};

  CdfTable& MagnitudeCdf(int chroma_plane, CflSign sign) {
    return magnitude[chroma_plane][sign == CflSign::kPositive ? 1 : 0];
  }
  const CdfTable& MagnitudeCdf(int chroma_plane, CflSign sign) const {
    return magnitude[chroma_plane][sign == CflSign::kPositive ? 1 : 0];
  }
};

// Joint sign first, then the magnitude of each plane whose sign is non-zero.
inline void EncodeCflParams(RangeEncoder& enc, CflContexts& ctx,
                            const CflParams& params) {
  params.Validate();
  enc.Encode(params.joint_sign(), ctx.joint_sign);
  for (int plane = 0; plane < 2; ++plane) {
    const int alpha = params.alpha(plane);
    if (alpha == 0) continue;
    enc.Encode(std::abs(alpha) - 1, ctx.MagnitudeCdf(plane, SignOf(alpha)));
  }
}

inline CflParams DecodeCflParams(RangeDecoder& dec, CflContexts& ctx) {
  const int joint_sign = dec.Decode(ctx.joint_sign);
  const CflSign signs[2] = {CflParams::SignCb(joint_sign),
                            CflParams::SignCr(joint_sign)};
  int mags[2] = {0, 0};
  for (int plane = 0; plane < 2; ++plane) {
    if (signs[plane] == CflSign::kZero) continue;
    mags[plane] = dec.Decode(ctx.MagnitudeCdf(plane, signs[plane]));
  }
  return CflParams::FromCoded(joint_sign, mags[0], mags[1]);
}

// Magnitude-only cost of one plane's alpha under frozen contexts (0 for a
// zero alpha).
inline uint32_t CflMagnitudeRateQ9(const CflContexts& ctx, int chroma_plane,
                                   int alpha_q3) {
  if (alpha_q3 == 0) return 0;
  return EstimateRateQ9(ctx.MagnitudeCdf(chroma_plane, SignOf(alpha_q3)),
                        std::abs(alpha_q3) - 1);
}

inline uint32_t CflParamsRateQ9(const CflContexts& ctx, const CflParams& params) {
  params.Validate();
  return EstimateRateQ9(ctx.joint_sign, params.joint_sign()) +
         CflMagnitudeRateQ9(ctx, 0, params.alpha_cb) +
         CflMagnitudeRateQ9(ctx, 1, params.alpha_cr);
}

}  // namespace cfl

#endif  // CFL_CFL_SIGNALING_H_
