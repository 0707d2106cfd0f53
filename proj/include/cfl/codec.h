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

#ifndef CFL_CODEC_H_
#define CFL_CODEC_H_

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cfl/cdf.h"
#include "cfl/cfl_core.h"
#include "cfl/cfl_params.h"
#include "cfl/cfl_signaling.h"
#include "cfl/error.h"
#include "cfl/frame.h"
#include "cfl/range_coder.h"
#include "cfl/rd_search.h"
#include "cfl/transform.h"

namespace cfl {

struct QuantizerConfig {
  int q_index = 32;

  void Validate() const {
    if (q_index < 0 || q_index > 255) {
      Fail(ErrorCode::kInvalidArgument, "q_index must be in [0, 255]");
    }
  }
  // 2^(q/12) at 8 bits, scaled with the sample range for deeper content.
  double Step(BitDepth depth) const {
    return std::exp2(q_index / 12.0) * static_cast<double>(1 << (depth.bits() - 8));
  }
};

enum class RateModel { kParamOnly, kFull };

inline std::string RateModelName(RateModel m) {
  return m == RateModel::kFull ? "full" : "param-only";
}

inline RateModel ParseRateModel(const std::string& s) {
  if (s == "param-only") return RateModel::kParamOnly;
  if (s == "full") return RateModel::kFull;
  Fail(ErrorCode::kInvalidArgument, "unknown rate model: " + s);
}

struct EncoderConfig {
  bool cfl_enabled = true;
  RateModel rate_model = RateModel::kParamOnly;
  double lambda_const = 0.057;
  int block_size = 8;  // chroma prediction/transform block, square
  SearchSpace search_space = SearchSpace::kPruned;

  void Validate() const {
    if (!IsTransformDim(block_size)) {
      Fail(ErrorCode::kUnsupportedBlockSize,
           "block size must be one of 4, 8, 16, 32: " + std::to_string(block_size));
    }
    if (!(lambda_const >= 0) || !std::isfinite(lambda_const)) {
      Fail(ErrorCode::kInvalidArgument, "lambda constant must be >= 0");
    }
  }
};

inline Lambda LambdaForStep(double lambda_const, double step) {
  return Lambda::FromDouble(lambda_const * step * step);
}

// One chroma prediction unit. Coordinates are chroma samples; distortion
// counts only samples inside the frame.
struct BlockTrace {
  int x = 0;
  int y = 0;
  ChromaMode mode = ChromaMode::kDc;
  int alpha_cb = 0;
  int alpha_cr = 0;
  uint64_t distortion = 0;
  uint32_t rate_q9 = 0;
  double cost = 0;

  double rate_bits() const { return RateToBits(rate_q9); }
};

struct CodedFrameStats {
  uint64_t total_bits = 0;  // range-coded payload only
  uint64_t sse[3] = {0, 0, 0};
  int dc_blocks = 0;
  int cfl_blocks = 0;
};

struct EncodedFrame {
  std::vector<uint8_t> bitstream;  // container: header + payload
  CodedFrameStats stats;
  Frame reconstruction;
  std::vector<BlockTrace> traces;
};

// Little-endian container:
//   "CFLF" | version u8 | width u32 | height u32 | sx u8 | sy u8 | bits u8 |
//   q_index u8 | flags u8 (bit 0: CfL enabled) | log2 block u8 |
//   payload length u32 | payload
struct FrameHeader {
  static constexpr uint8_t kVersion = 1;
  static constexpr size_t kSize = 4 + 1 + 4 + 4 + 6 + 4;

  int width = 0;
  int height = 0;
  ChromaFormat format;
  BitDepth depth;
  int q_index = 0;
  bool cfl_enabled = false;
  int block_size = 8;
};

namespace internal {

inline void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline uint32_t GetU32(std::span<const uint8_t> in, size_t at) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace internal

inline std::vector<uint8_t> WriteContainer(const FrameHeader& h,
                                           std::span<const uint8_t> payload) {
  std::vector<uint8_t> out = {'C', 'F', 'L', 'F', FrameHeader::kVersion};
  internal::PutU32(out, static_cast<uint32_t>(h.width));
  internal::PutU32(out, static_cast<uint32_t>(h.height));
  out.push_back(static_cast<uint8_t>(h.format.sx));
  out.push_back(static_cast<uint8_t>(h.format.sy));
  out.push_back(static_cast<uint8_t>(h.depth.bits()));
  out.push_back(static_cast<uint8_t>(h.q_index));
  out.push_back(h.cfl_enabled ? 1 : 0);
  out.push_back(static_cast<uint8_t>(internal::Log2Dim(h.block_size)));
  internal::PutU32(out, static_cast<uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

struct ParsedContainer {
  FrameHeader header;
  std::span<const uint8_t> payload;
};

inline ParsedContainer ParseContainer(std::span<const uint8_t> data) {
  if (data.size() < 4 || data[0] != 'C' || data[1] != 'F' || data[2] != 'L' ||
      data[3] != 'F') {
    Fail(ErrorCode::kMissingMagic, "not a CFLF container");
  }
  if (data.size() < FrameHeader::kSize) {
    Fail(ErrorCode::kMalformedHeader, "container header truncated");
  }
  if (data[4] != FrameHeader::kVersion) {
    Fail(ErrorCode::kUnsupportedFormat, "container version " + std::to_string(data[4]));
  }
  ParsedContainer pc;
  FrameHeader& h = pc.header;
  h.width = static_cast<int>(internal::GetU32(data, 5));
  h.height = static_cast<int>(internal::GetU32(data, 9));
  h.format = {data[13], data[14]};
  if (!h.format.IsValid()) Fail(ErrorCode::kUnsupportedColorspace, "bad subsampling");
  h.depth = BitDepth::FromBits(data[15]);
  h.q_index = data[16];
  if (data[17] & ~1u) Fail(ErrorCode::kMalformedHeader, "unknown flag bits");
  h.cfl_enabled = (data[17] & 1) != 0;
  if (data[18] < 2 || data[18] > 5) Fail(ErrorCode::kUnsupportedBlockSize, "block size");
  h.block_size = 1 << data[18];
  if (h.width <= 0 || h.height <= 0 || h.width > (1 << 16) || h.height > (1 << 16)) {
    Fail(ErrorCode::kMalformedHeader, "frame dimensions");
  }
  const uint32_t len = internal::GetU32(data, 19);
  if (data.size() - FrameHeader::kSize < len) {
    Fail(ErrorCode::kTruncatedStream, "payload shorter than declared");
  }
  pc.payload = data.subspan(FrameHeader::kSize, len);
  return pc;
}

// Adaptive state shared by encoder and decoder.
struct CodingContexts {
  CdfTable mode{2};  // 0 = DC, 1 = CfL
  CflContexts cfl;
  CoefContexts luma;
  CoefContexts chroma;
};

namespace internal {

// Padded geometry: luma is extended to whole superblocks (chroma block size
// times subsampling), chroma to the matching chroma grid.
struct CodingGeometry {
  int block = 8;
  ChromaFormat format;
  int luma_width = 0, luma_height = 0;
  int chroma_width = 0, chroma_height = 0;
  int sb_cols = 0, sb_rows = 0;

  CodingGeometry(int width, int height, ChromaFormat fmt, int block_size)
      : block(block_size), format(fmt) {
    const int sbw = block * fmt.sx;
    const int sbh = block * fmt.sy;
    sb_cols = (width + sbw - 1) / sbw;
    sb_rows = (height + sbh - 1) / sbh;
    luma_width = sb_cols * sbw;
    luma_height = sb_rows * sbh;
    chroma_width = sb_cols * block;
    chroma_height = sb_rows * block;
  }

  Frame MakeFrame(BitDepth depth) const {
    Frame f;
    f.format = format;
    f.depth = depth;
    f.y = Plane(luma_width, luma_height);
    f.cb = Plane(chroma_width, chroma_height);
    f.cr = Plane(chroma_width, chroma_height);
    return f;
  }
};

inline DcPrediction DcFromRecon(const Plane& recon, int x0, int y0, int w, int h,
                                BitDepth depth) {
  std::optional<std::span<const uint16_t>> above;
  std::optional<std::span<const uint16_t>> left;
  std::vector<uint16_t> left_col;
  if (y0 > 0) above = recon.row(y0 - 1).subspan(x0, w);
  if (x0 > 0) {
    left_col.resize(h);
    for (int i = 0; i < h; ++i) left_col[i] = recon(x0 - 1, y0 + i);
    left = std::span<const uint16_t>(left_col);
  }
  return DcPredict(above, left, depth);
}

inline std::vector<int32_t> Residual(const Plane& src, int x0, int y0, const Plane& pred) {
  std::vector<int32_t> r(pred.width() * pred.height());
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      r[y * pred.width() + x] = static_cast<int32_t>(src(x0 + x, y0 + y)) - pred(x, y);
    }
  }
  return r;
}

inline Plane DcBlock(DcPrediction dc, int w, int h) {
  Plane p(w, h);
  p.Fill(dc.value);
  return p;
}

// pred + residual, clamped, written into `recon` at (x0, y0).
inline void Reconstruct(Plane& recon, int x0, int y0, const Plane& pred,
                        std::span<const int32_t> residual, BitDepth depth) {
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      const int32_t v = pred(x, y) + residual[y * pred.width() + x];
      recon(x0 + x, y0 + y) = static_cast<uint16_t>(std::clamp(v, 0, depth.max_value()));
    }
  }
}

inline uint64_t BlockSse(const Plane& a, const Plane& b, int x0, int y0, int w, int h,
                         int clip_w, int clip_h) {
  uint64_t sse = 0;
  for (int y = y0; y < std::min(y0 + h, clip_h); ++y) {
    for (int x = x0; x < std::min(x0 + w, clip_w); ++x) {
      const int64_t d = static_cast<int64_t>(a(x, y)) - b(x, y);
      sse += static_cast<uint64_t>(d * d);
    }
  }
  return sse;
}

// Transform-coded outcome of one chroma plane under a given prediction.
struct PlaneTrial {
  Plane pred;
  TransformResult tq;
  uint64_t distortion = 0;  // SSE of the reconstruction, padded block
};

inline PlaneTrial TryPrediction(const Plane& src, int x0, int y0, Plane pred, double step,
                                const CoefContexts& ctx, BitDepth depth) {
  PlaneTrial t;
  const BlockSize size{pred.width(), pred.height()};
  t.tq = TransformQuantizeBlock(Residual(src, x0, y0, pred), size, step, ctx);
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      const int32_t r = std::clamp(pred(x, y) + t.tq.recon_residual[y * size.width + x], 0,
                                   depth.max_value());
      const int64_t d = r - static_cast<int32_t>(src(x0 + x, y0 + y));
      t.distortion += static_cast<uint64_t>(d * d);
    }
  }
  t.pred = std::move(pred);
  return t;
}

}  // namespace internal

inline EncodedFrame EncodeFrame(const Frame& frame, const QuantizerConfig& q,
                                const EncoderConfig& cfg) {
  frame.Validate();
  q.Validate();
  cfg.Validate();
  if (frame.width() <= 0 || frame.height() <= 0) {
    Fail(ErrorCode::kInvalidArgument, "empty frame");
  }
  const BitDepth depth = frame.depth;
  const ChromaFormat fmt = frame.format;
  const int b = cfg.block_size;
  const internal::CodingGeometry geo(frame.width(), frame.height(), fmt, b);
  const double step = q.Step(depth);
  const Lambda lambda = LambdaForStep(cfg.lambda_const, step);
  const int vis_cw = frame.cb.width(), vis_ch = frame.cb.height();

  Frame src = geo.MakeFrame(depth);
  src.y = frame.y.Crop(0, 0, geo.luma_width, geo.luma_height);
  src.cb = frame.cb.Crop(0, 0, geo.chroma_width, geo.chroma_height);
  src.cr = frame.cr.Crop(0, 0, geo.chroma_width, geo.chroma_height);
  Frame recon = geo.MakeFrame(depth);

  EncodedFrame out;
  CodingContexts ctx;
  RangeEncoder enc;
  const BlockSize bs{b, b};

  auto code_dc_block = [&](int p, int x0, int y0, CoefContexts& cctx) {
    Plane& rp = recon.plane(p);
    const Plane pred = internal::DcBlock(internal::DcFromRecon(rp, x0, y0, b, b, depth), b, b);
    const TransformResult tq = TransformQuantizeBlock(
        internal::Residual(src.plane(p), x0, y0, pred), bs, step, cctx);
    EncodeCoefficients(enc, cctx, tq.levels, bs);
    internal::Reconstruct(rp, x0, y0, pred, tq.recon_residual, depth);
    return tq.rate_q9;
  };

  for (int sby = 0; sby < geo.sb_rows; ++sby) {
    for (int sbx = 0; sbx < geo.sb_cols; ++sbx) {
      const int lx0 = sbx * b * fmt.sx, ly0 = sby * b * fmt.sy;
      for (int j = 0; j < fmt.sy; ++j) {
        for (int i = 0; i < fmt.sx; ++i) code_dc_block(0, lx0 + i * b, ly0 + j * b, ctx.luma);
      }

      const int cx = sbx * b, cy = sby * b;
      BlockTrace trace;
      trace.x = cx;
      trace.y = cy;
      if (!cfg.cfl_enabled) {
        trace.rate_q9 = code_dc_block(1, cx, cy, ctx.chroma);
        trace.rate_q9 += code_dc_block(2, cx, cy, ctx.chroma);
        ++out.stats.dc_blocks;
      } else {
        const Q3AcBlock ac = LumaToQ3Ac(recon.y, lx0, ly0, fmt, bs);
        const DcPrediction dc[2] = {internal::DcFromRecon(recon.cb, cx, cy, b, b, depth),
                                    internal::DcFromRecon(recon.cr, cx, cy, b, b, depth)};
        const RdRateModel model{ctx.mode, ctx.cfl};
        const RdConfig rd_cfg{lambda, cfg.search_space};

        CflParams chosen;
        internal::PlaneTrial trials[2];
        uint32_t side_rate = 0;
        if (cfg.rate_model == RateModel::kFull) {
          std::vector<internal::PlaneTrial> all[2];
          PlaneCandidateCosts costs[2];
          for (int p = 0; p < 2; ++p) {
            for (int a = -kMaxAlphaQ3; a <= kMaxAlphaQ3; ++a) {
              all[p].push_back(internal::TryPrediction(src.plane(p + 1), cx, cy,
                                                       CflPredict(ac, a, dc[p], depth), step,
                                                       ctx.chroma, depth));
              costs[p].distortion[a + kMaxAlphaQ3] = all[p].back().distortion;
              costs[p].extra_rate_q9[a + kMaxAlphaQ3] = all[p].back().tq.rate_q9;
            }
          }
          const RdDecision best = RdSelectFromCosts(costs[0], costs[1], rd_cfg, model).best;
          chosen = best.params;
          for (int p = 0; p < 2; ++p) {
            trials[p] = std::move(all[p][chosen.alpha(p) + kMaxAlphaQ3]);
          }
        } else {
          const Plane ref_cb = src.cb.Crop(cx, cy, b, b);
          const Plane ref_cr = src.cr.Crop(cx, cy, b, b);
          const CflParams cand =
              RdSelect(ac, ac, ref_cb, ref_cr, dc[0], dc[1], depth, rd_cfg, model)
                  .best_cfl.params;
          // Final DC vs CfL decision with residual rate included.
          internal::PlaneTrial dc_trial[2], cfl_trial[2];
          for (int p = 0; p < 2; ++p) {
            dc_trial[p] = internal::TryPrediction(src.plane(p + 1), cx, cy,
                                                  internal::DcBlock(dc[p], b, b), step,
                                                  ctx.chroma, depth);
            cfl_trial[p] = internal::TryPrediction(src.plane(p + 1), cx, cy,
                                                   CflPredict(ac, cand.alpha(p), dc[p], depth),
                                                   step, ctx.chroma, depth);
          }
          const uint64_t d_dc = dc_trial[0].distortion + dc_trial[1].distortion;
          const uint64_t r_dc = EstimateRateQ9(ctx.mode, 0) + uint64_t{dc_trial[0].tq.rate_q9} +
                                dc_trial[1].tq.rate_q9;
          const uint64_t d_cfl = cfl_trial[0].distortion + cfl_trial[1].distortion;
          const uint64_t r_cfl = EstimateRateQ9(ctx.mode, 1) +
                                 uint64_t{CflParamsRateQ9(ctx.cfl, cand)} +
                                 cfl_trial[0].tq.rate_q9 + cfl_trial[1].tq.rate_q9;
          const bool use_cfl = internal::ScaledCost(d_cfl, r_cfl, lambda) <
                               internal::ScaledCost(d_dc, r_dc, lambda);
          if (use_cfl) chosen = cand;
          for (int p = 0; p < 2; ++p) {
            trials[p] = std::move(use_cfl ? cfl_trial[p] : dc_trial[p]);
          }
        }

        const bool is_cfl = chosen.alpha_cb != 0 || chosen.alpha_cr != 0;
        side_rate = EstimateRateQ9(ctx.mode, is_cfl ? 1 : 0);
        if (is_cfl) side_rate += CflParamsRateQ9(ctx.cfl, chosen);
        enc.Encode(is_cfl ? 1 : 0, ctx.mode);
        if (is_cfl) EncodeCflParams(enc, ctx.cfl, chosen);
        trace.rate_q9 = side_rate;
        for (int p = 0; p < 2; ++p) {
          EncodeCoefficients(enc, ctx.chroma, trials[p].tq.levels, bs);
          internal::Reconstruct(recon.plane(p + 1), cx, cy, trials[p].pred,
                                trials[p].tq.recon_residual, depth);
          trace.rate_q9 += trials[p].tq.rate_q9;
        }
        trace.mode = is_cfl ? ChromaMode::kCfl : ChromaMode::kDc;
        trace.alpha_cb = chosen.alpha_cb;
        trace.alpha_cr = chosen.alpha_cr;
        ++(is_cfl ? out.stats.cfl_blocks : out.stats.dc_blocks);
      }
      for (int p = 1; p < 3; ++p) {
        trace.distortion +=
            internal::BlockSse(recon.plane(p), src.plane(p), cx, cy, b, b, vis_cw, vis_ch);
      }
      trace.cost = static_cast<double>(trace.distortion) + lambda.value() * trace.rate_bits();
      out.traces.push_back(trace);
    }
  }

  const std::vector<uint8_t> payload = enc.Finish();
  out.stats.total_bits = uint64_t{payload.size()} * 8;
  FrameHeader h;
  h.width = frame.width();
  h.height = frame.height();
  h.format = fmt;
  h.depth = depth;
  h.q_index = q.q_index;
  h.cfl_enabled = cfg.cfl_enabled;
  h.block_size = b;
  out.bitstream = WriteContainer(h, payload);

  out.reconstruction.format = fmt;
  out.reconstruction.depth = depth;
  for (int p = 0; p < 3; ++p) {
    const Plane& orig = frame.plane(p);
    out.reconstruction.plane(p) = recon.plane(p).Crop(0, 0, orig.width(), orig.height());
    out.stats.sse[p] = Sse(out.reconstruction.plane(p), orig);
  }
  return out;
}

inline Frame DecodeFrame(std::span<const uint8_t> bitstream) {
  const ParsedContainer pc = ParseContainer(bitstream);
  const FrameHeader& h = pc.header;
  const int b = h.block_size;
  const BitDepth depth = h.depth;
  const ChromaFormat fmt = h.format;
  const internal::CodingGeometry geo(h.width, h.height, fmt, b);
  const double step = QuantizerConfig{h.q_index}.Step(depth);
  Frame recon = geo.MakeFrame(depth);
  CodingContexts ctx;
  RangeDecoder dec(pc.payload);
  const BlockSize bs{b, b};

  auto decode_block = [&](int p, int x0, int y0, const Plane& pred, CoefContexts& cctx) {
    const std::vector<int32_t> levels = DecodeCoefficients(dec, cctx, bs);
    internal::Reconstruct(recon.plane(p), x0, y0, pred, ReconstructResidual(levels, bs, step),
                          depth);
  };
  auto dc_pred = [&](int p, int x0, int y0) {
    return internal::DcFromRecon(recon.plane(p), x0, y0, b, b, depth);
  };

  for (int sby = 0; sby < geo.sb_rows; ++sby) {
    for (int sbx = 0; sbx < geo.sb_cols; ++sbx) {
      const int lx0 = sbx * b * fmt.sx, ly0 = sby * b * fmt.sy;
      for (int j = 0; j < fmt.sy; ++j) {
        for (int i = 0; i < fmt.sx; ++i) {
          const int x0 = lx0 + i * b, y0 = ly0 + j * b;
          decode_block(0, x0, y0, internal::DcBlock(dc_pred(0, x0, y0), b, b), ctx.luma);
        }
      }
      const int cx = sbx * b, cy = sby * b;
      const DcPrediction dc[2] = {dc_pred(1, cx, cy), dc_pred(2, cx, cy)};
      CflParams params;
      if (h.cfl_enabled && dec.Decode(ctx.mode) == 1) params = DecodeCflParams(dec, ctx.cfl);
      if (params.alpha_cb != 0 || params.alpha_cr != 0) {
        const Q3AcBlock ac = LumaToQ3Ac(recon.y, lx0, ly0, fmt, bs);
        for (int p = 0; p < 2; ++p) {
          decode_block(p + 1, cx, cy, CflPredict(ac, params.alpha(p), dc[p], depth),
                       ctx.chroma);
        }
      } else {
        for (int p = 0; p < 2; ++p) {
          decode_block(p + 1, cx, cy, internal::DcBlock(dc[p], b, b), ctx.chroma);
        }
      }
    }
  }

  Frame out = Frame::Create(h.width, h.height, fmt, depth);
  for (int p = 0; p < 3; ++p) {
    out.plane(p) =
        recon.plane(p).Crop(0, 0, out.plane(p).width(), out.plane(p).height());
  }
  return out;
}

}  // namespace cfl

#endif  // CFL_CODEC_H_
