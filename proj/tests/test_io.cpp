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

#include <sstream>
#include <string>

#include "cfl/color.h"
#include "cfl/frame.h"
#include "cfl/y4m.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace cfl {
namespace {

using testing::RandomFrame;

Error CaptureError(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error raised";
  return Error(ErrorCode::kInvalidArgument, "none");
}

TEST(Y4mHeader, ParsesGeometryRateAndFormat) {
  const auto h = ParseY4mHeader("YUV4MPEG2 W64 H48 F30:1 Ip C420jpeg\n");
  EXPECT_EQ(h.width, 64);
  EXPECT_EQ(h.height, 48);
  EXPECT_EQ(h.fps_num, 30);
  EXPECT_EQ(h.fps_den, 1);
  EXPECT_EQ(h.format, ChromaFormat::k420());
  EXPECT_EQ(h.depth.bits(), 8);
}

TEST(Y4mHeader, HighBitDepthTags) {
  EXPECT_EQ(ParseY4mHeader("YUV4MPEG2 W8 H8 C444p10\n").depth.bits(), 10);
  EXPECT_EQ(ParseY4mHeader("YUV4MPEG2 W8 H8 C422p12\n").format, ChromaFormat::k422());
  EXPECT_EQ(ParseY4mHeader("YUV4MPEG2 W8 H8 C440\n").format, ChromaFormat::k440());
  // Absent C tag means 4:2:0 8-bit.
  EXPECT_EQ(ParseY4mHeader("YUV4MPEG2 W8 H8\n").format, ChromaFormat::k420());
}

TEST(Y4mHeader, Errors) {
  EXPECT_EQ(CaptureError([] { ParseY4mHeader("YUV4MPEG W8 H8\n"); }).code(),
            ErrorCode::kMissingMagic);
  EXPECT_EQ(CaptureError([] { ParseY4mHeader("YUV4MPEG2 W8 H8 Cmono\n"); }).code(),
            ErrorCode::kUnsupportedColorspace);
  EXPECT_EQ(CaptureError([] { ParseY4mHeader("YUV4MPEG2 W8 H8 C444alpha\n"); }).code(),
            ErrorCode::kUnsupportedColorspace);
  EXPECT_EQ(CaptureError([] { ParseY4mHeader("YUV4MPEG2 H8\n"); }).code(),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(CaptureError([] { ParseY4mHeader("YUV4MPEG2 Wx H8\n"); }).code(),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(CaptureError([] { ParseY4mHeader("YUV4MPEG2 W8 H8 It\n"); }).code(),
            ErrorCode::kUnsupportedFormat);
  EXPECT_EQ(CaptureError([] { ParseY4mHeader("YUV4MPEG2 W8 H8 C420p9\n"); }).code(),
            ErrorCode::kUnsupportedColorspace);
}

TEST(Y4mFrame, RoundTripAllFormatsAndDepths) {
  std::mt19937_64 rng(7);
  for (ChromaFormat fmt : testing::kAllFormats) {
    for (int bits : testing::kAllDepths) {
      Y4mVideo video;
      video.frames.push_back(RandomFrame(rng, 13, 7, fmt, BitDepth::FromBits(bits)));
      video.frames.push_back(RandomFrame(rng, 13, 7, fmt, BitDepth::FromBits(bits)));
      video.header = MakeY4mHeader(video.frames[0]);
      video.header.tags.push_back("XCOLORRANGE=FULL");
      video.frame_params = {"", " Xfoo"};
      std::stringstream s;
      WriteY4m(s, video);
      const std::string bytes = s.str();
      std::istringstream in(bytes);
      const Y4mVideo back = ReadY4m(in);
      ASSERT_EQ(back.frames.size(), 2u);
      EXPECT_EQ(back.frames[0], video.frames[0]);
      EXPECT_EQ(back.frames[1], video.frames[1]);
      EXPECT_EQ(back.header.tags, video.header.tags);
      EXPECT_EQ(back.frame_params, video.frame_params);
      std::stringstream again;
      WriteY4m(again, back);
      EXPECT_EQ(again.str(), bytes);
    }
  }
}

TEST(Y4mFrame, ChromaPlaneSizesRoundUp) {
  const Frame f = Frame::Create(13, 7, ChromaFormat::k420(), BitDepth::FromBits(8));
  EXPECT_EQ(f.cb.width(), 7);
  EXPECT_EQ(f.cb.height(), 4);
}

TEST(Y4mFrame, TruncatedAndMissingMarker) {
  std::mt19937_64 rng(1);
  Y4mVideo video;
  video.frames.push_back(RandomFrame(rng, 8, 8, ChromaFormat::k420(), BitDepth::FromBits(8)));
  video.header = MakeY4mHeader(video.frames[0]);
  std::stringstream s;
  WriteY4m(s, video);
  const std::string bytes = s.str();
  std::istringstream cut(bytes.substr(0, bytes.size() - 5));
  EXPECT_EQ(CaptureError([&] { ReadY4m(cut); }).code(), ErrorCode::kTruncatedFrame);
  std::string bad = bytes;
  bad.replace(bad.find("FRAME"), 5, "FRAMX");
  std::istringstream in(bad);
  EXPECT_EQ(CaptureError([&] { ReadY4m(in); }).code(), ErrorCode::kMissingFrameMarker);
}

TEST(Y4mFrame, HighBitDepthIsLittleEndian) {
  std::string bytes = "YUV4MPEG2 W2 H1 C444p10\nFRAME\n";
  const unsigned char samples[] = {0x01, 0x02, 0xFF, 0x03, 0, 0, 0, 0, 0, 0, 0, 0};
  bytes.append(reinterpret_cast<const char*>(samples), sizeof(samples));
  std::istringstream in(bytes);
  const Y4mVideo v = ReadY4m(in);
  EXPECT_EQ(v.frames[0].y(0, 0), 0x0201);
  EXPECT_EQ(v.frames[0].y(1, 0), 0x03FF);
}

TEST(Color, PrimaryColorsAndGray) {
  auto convert = [](int r, int g, int b) {
    RgbImage img{Plane(1, 1), Plane(1, 1), Plane(1, 1)};
    img.r(0, 0) = static_cast<uint16_t>(r);
    img.g(0, 0) = static_cast<uint16_t>(g);
    img.b(0, 0) = static_cast<uint16_t>(b);
    const Frame f = RgbToYcbcr(img);
    return std::array<int, 3>{f.y(0, 0), f.cb(0, 0), f.cr(0, 0)};
  };
  EXPECT_EQ(convert(0, 0, 0), (std::array<int, 3>{0, 128, 128}));
  EXPECT_EQ(convert(255, 255, 255), (std::array<int, 3>{255, 128, 128}));
  EXPECT_EQ(convert(128, 128, 128), (std::array<int, 3>{128, 128, 128}));
  // Full-range BT.601 reference values rounded to nearest.
  EXPECT_EQ(convert(255, 0, 0), (std::array<int, 3>{76, 85, 255}));
  EXPECT_EQ(convert(0, 255, 0), (std::array<int, 3>{150, 44, 21}));
  EXPECT_EQ(convert(0, 0, 255), (std::array<int, 3>{29, 255, 107}));
}

TEST(Color, MatchesFloatingPointMatrix) {
  std::mt19937_64 rng(3);
  RgbImage img{testing::RandomPlane(rng, 64, 64, 0, 255), testing::RandomPlane(rng, 64, 64, 0, 255),
               testing::RandomPlane(rng, 64, 64, 0, 255)};
  const Frame f = RgbToYcbcr(img);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      const double r = img.r(x, y), g = img.g(x, y), b = img.b(x, y);
      const double yy = 0.299 * r + 0.587 * g + 0.114 * b;
      const double cb = 128 - 0.168736 * r - 0.331264 * g + 0.5 * b;
      const double cr = 128 + 0.5 * r - 0.418688 * g - 0.081312 * b;
      EXPECT_NEAR(f.y(x, y), yy, 0.51);
      EXPECT_NEAR(f.cb(x, y), std::min(255.0, cb), 0.51);
      EXPECT_NEAR(f.cr(x, y), std::min(255.0, cr), 0.51);
    }
  }
}

TEST(Color, DimensionMismatch) {
  EXPECT_EQ(CaptureError([] { RgbToYcbcr(Plane(2, 2), Plane(2, 2), Plane(3, 2)); }).code(),
            ErrorCode::kDimensionMismatch);
}

TEST(Ppm, RoundTripAndErrors) {
  std::mt19937_64 rng(5);
  RgbImage img{testing::RandomPlane(rng, 5, 3, 0, 255), testing::RandomPlane(rng, 5, 3, 0, 255),
               testing::RandomPlane(rng, 5, 3, 0, 255)};
  std::stringstream s;
  WritePpm(s, img);
  const std::string bytes = s.str();
  std::istringstream in(bytes);
  const RgbImage back = ReadPpm(in);
  EXPECT_EQ(back.r, img.r);
  EXPECT_EQ(back.g, img.g);
  EXPECT_EQ(back.b, img.b);

  std::istringstream commented("P6\n# comment\n1 1\n255\nabc");
  EXPECT_EQ(ReadPpm(commented).g(0, 0), 'b');
  std::istringstream p5("P5\n1 1\n255\na");
  EXPECT_EQ(CaptureError([&] { ReadPpm(p5); }).code(), ErrorCode::kMissingMagic);
  std::istringstream wide("P6\n1 1\n65535\nabcdef");
  EXPECT_EQ(CaptureError([&] { ReadPpm(wide); }).code(), ErrorCode::kUnsupportedFormat);
  std::istringstream cut(bytes.substr(0, bytes.size() - 1));
  EXPECT_EQ(CaptureError([&] { ReadPpm(cut); }).code(), ErrorCode::kTruncatedFrame);
}

TEST(Downsample, ConstantPlanesStayConstant) {
  Frame f = Frame::Create(9, 5, ChromaFormat::k444(), BitDepth::FromBits(10));
  f.y.Fill(100);
  f.cb.Fill(517);
  f.cr.Fill(3);
  for (ChromaFormat fmt : testing::kAllFormats) {
    const Frame d = ChromaDownsample(f, fmt);
    EXPECT_EQ(d.cb.width(), fmt.ChromaWidth(9));
    EXPECT_EQ(d.cb.height(), fmt.ChromaHeight(5));
    for (int y = 0; y < d.cb.height(); ++y) {
      for (int x = 0; x < d.cb.width(); ++x) {
        EXPECT_EQ(d.cb(x, y), 517);
        EXPECT_EQ(d.cr(x, y), 3);
      }
    }
  }
}

TEST(Downsample, RoundedBoxMean) {
  Frame f = Frame::Create(2, 2, ChromaFormat::k444(), BitDepth::FromBits(8));
  f.cb(0, 0) = 10;
  f.cb(1, 0) = 11;
  f.cb(0, 1) = 11;
  f.cb(1, 1) = 11;
  EXPECT_EQ(ChromaDownsample(f, ChromaFormat::k420()).cb(0, 0), 11);  // 43/4 = 10.75
  EXPECT_EQ(ChromaDownsample(f, ChromaFormat::k422()).cb(0, 0), 11);  // 21/2 = 10.5
  EXPECT_EQ(ChromaDownsample(f, ChromaFormat::k444()).cb, f.cb);
}

TEST(Downsample, RejectsSubsampledSource) {
  const Frame f = Frame::Create(4, 4, ChromaFormat::k420(), BitDepth::FromBits(8));
  EXPECT_EQ(CaptureError([&] { ChromaDownsample(f, ChromaFormat::k420()); }).code(),
            ErrorCode::kUnsupportedFormat);
}

TEST(Frame, BitDepthValidation) {
  EXPECT_EQ(CaptureError([] { BitDepth::FromBits(9); }).code(), ErrorCode::kUnsupportedFormat);
  EXPECT_EQ(BitDepth::FromBits(12).max_value(), 4095);
  EXPECT_EQ(BitDepth::FromBits(10).midpoint(), 512);
}

}  // namespace
}  // namespace cfl
