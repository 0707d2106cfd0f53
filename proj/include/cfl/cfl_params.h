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

#ifndef CFL_CFL_PARAMS_H_
#define CFL_CFL_PARAMS_H_

#include <cstdlib>
#include <string>

#include "cfl/cfl_core.h"
#include "cfl/error.h"

namespace cfl {

enum class CflSign : int { kZero = 0, kNegative = 1, kPositive = 2 };

inline constexpr int kNumJointSigns = 8;
inline constexpr int kNumAlphaMagnitudes = 16;

inline CflSign SignOf(int alpha_q3) {
  return alpha_q3 == 0 ? CflSign::kZero
                       : (alpha_q3 < 0 ? CflSign::kNegative : CflSign::kPositive);
}

// Scaling parameters of one CfL prediction unit, stored as signed Q3 alphas.
// The coded form is a joint sign (8 values, (0, 0) excluded) plus one
// magnitude index per non-zero plane, alpha = (index + 1) / 8.
struct CflParams {
  int alpha_cb = 0;
  int alpha_cr = 0;

  bool IsValid() const {
    return (alpha_cb != 0 || alpha_cr != 0) && std::abs(alpha_cb) <= kMaxAlphaQ3 &&
           std::abs(alpha_cr) <= kMaxAlphaQ3;
  }

  void Validate() const {
    if (!IsValid()) {
      Fail(ErrorCode::kInvalidParams, "alpha pair (" + std::to_string(alpha_cb) +
                                          ", " + std::to_string(alpha_cr) + ")");
    }
  }

  // sign_cb * 3 + sign_cr - 1, in [0, 8).
  int joint_sign() const {
    return static_cast<int>(SignOf(alpha_cb)) * 3 +
           static_cast<int>(SignOf(alpha_cr)) - 1;
  }
  int mag_cb() const { return std::abs(alpha_cb) - 1; }
  int mag_cr() const { return std::abs(alpha_cr) - 1; }
  int alpha(int chroma_plane) const {
    return chroma_plane == 0 ? alpha_cb : alpha_cr;
  }

  static CflSign SignCb(int joint_sign) {
    return static_cast<CflSign>((joint_sign + 1) / 3);
  }
  static CflSign SignCr(int joint_sign) {
    return static_cast<CflSign>((joint_sign + 1) % 3);
  }

  static int SignedAlpha(CflSign sign, int mag_index) {
    switch (sign) {
      case CflSign::kZero: return 0;
      case CflSign::kNegative: return -(mag_index + 1);
      case CflSign::kPositive: return mag_index + 1;
    }
    return 0;
  }

  // Builds params from the coded fields. Magnitudes of zero-sign planes are
  // ignored.
  static CflParams FromCoded(int joint_sign, int mag_cb, int mag_cr) {
    if (joint_sign < 0 || joint_sign >= kNumJointSigns || mag_cb < 0 ||
        mag_cb >= kNumAlphaMagnitudes || mag_cr < 0 ||
        mag_cr >= kNumAlphaMagnitudes) {
      Fail(ErrorCode::kInvalidParams, "coded CfL fields out of range");
    }
    return {SignedAlpha(SignCb(joint_sign), mag_cb),
            SignedAlpha(SignCr(joint_sign), mag_cr)};
  }

  friend bool operator==(CflParams, CflParams) = default;
};

}  // namespace cfl

#endif  // CFL_CFL_PARAMS_H_
