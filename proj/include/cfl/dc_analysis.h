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

#ifndef CFL_DC_ANALYSIS_H_
#define CFL_DC_ANALYSIS_H_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfl/cfl_core.h"
#include "cfl/error.h"
#include "cfl/frame.h"

namespace cfl {

// Box-plot summary of one block size. Quartiles use linear interpolation
// between order statistics; whiskers reach the most extreme samples within
// 1.5 IQR of the box.
struct DcErrorStats {
  int size = 0;
  size_t count = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double lo_whisker = 0;
  double hi_whisker = 0;
};

inline double Quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) Fail(ErrorCode::kInvalidArgument, "quantile of empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline DcErrorStats Summarize(int size, std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  DcErrorStats s;
  s.size = size;
  s.count = samples.size();
  s.q1 = Quantile(samples, 0.25);
  s.median = Quantile(samples, 0.5);
  s.q3 = Quantile(samples, 0.75);
  const double iqr = s.q3 - s.q1;
  s.lo_whisker = s.q1;
  s.hi_whisker = s.q3;
  for (double v : samples) {
    if (v >= s.q1 - 1.5 * iqr) {
      s.lo_whisker = std::min(s.lo_whisker, v);
      break;
    }
  }
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
    if (*it <= s.q3 + 1.5 * iqr) {
      s.hi_whisker = std::max(s.hi_whisker, *it);
      break;
    }
  }
  return s;
}

// Squared error between each whole size x size chroma block's mean and the
// DC predicted from the samples bordering it. Both chroma planes of every
// frame contribute. The corner block, which has no neighbors, is skipped.
inline std::vector<double> DcErrors(const Frame& frame, int size) {
  std::vector<double> out;
  std::vector<uint16_t> left(size);
  for (int p = 1; p < 3; ++p) {
    const Plane& c = frame.plane(p);
    for (int y = 0; y + size <= c.height(); y += size) {
      for (int x = 0; x + size <= c.width(); x += size) {
        if (x == 0 && y == 0) continue;
        std::optional<std::span<const uint16_t>> above_opt, left_opt;
        if (y > 0) above_opt = c.row(y - 1).subspan(x, size);
        if (x > 0) {
          for (int i = 0; i < size; ++i) left[i] = c(x - 1, y + i);
          left_opt = std::span<const uint16_t>(left);
        }
        const DcPrediction dc = DcPredict(above_opt, left_opt, frame.depth);
        uint64_t sum = 0;
        for (int v = 0; v < size; ++v) {
          for (uint16_t s : c.row(y + v).subspan(x, size)) sum += s;
        }
        const double err = static_cast<double>(sum) / (size * size) - dc.value;
        out.push_back(err * err);
      }
    }
  }
  return out;
}

// Pooled over the whole corpus; sizes with no whole block are omitted.
inline std::vector<DcErrorStats> DcErrorAnalysis(const std::vector<Frame>& frames,
                                                 const std::vector<int>& sizes = {4, 8, 16,
                                                                                  32}) {
  if (frames.empty()) Fail(ErrorCode::kEmptyCorpus, "no frames to analyze");
  std::vector<DcErrorStats> stats;
  for (int size : sizes) {
    if (!IsCodecBlockDim(size)) {
      Fail(ErrorCode::kInvalidBlockSize, "block size " + std::to_string(size));
    }
    std::vector<double> all;
    for (const Frame& f : frames) {
      const auto e = DcErrors(f, size);
      all.insert(all.end(), e.begin(), e.end());
    }
    if (!all.empty()) stats.push_back(Summarize(size, std::move(all)));
  }
  return stats;
}

inline std::string DcErrorCsv(const std::vector<DcErrorStats>& stats) {
  std::string out = "size,q1,median,q3,lo_whisker,hi_whisker\n";
  char line[256];
  for (const auto& s : stats) {
    std::snprintf(line, sizeof(line), "%d,%.6f,%.6f,%.6f,%.6f,%.6f\n", s.size, s.q1,
                  s.median, s.q3, s.lo_whisker, s.hi_whisker);
    out += line;
  }
  return out;
}

}  // namespace cfl

#endif  // CFL_DC_ANALYSIS_H_
