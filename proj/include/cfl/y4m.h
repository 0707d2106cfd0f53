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

#ifndef CFL_Y4M_H_
#define CFL_Y4M_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cfl/error.h"
#include "cfl/frame.h"

namespace cfl {

// Stream parameters of a YUV4MPEG2 file. `tags` keeps the header tokens in
// their original order so that a rewritten stream is byte-identical.
struct Y4mHeader {
  int width = 0;
  int height = 0;
  int fps_num = 30;
  int fps_den = 1;
  ChromaFormat format = ChromaFormat::k420();
  BitDepth depth;
  std::vector<std::string> tags;
};

struct Y4mVideo {
  Y4mHeader header;
  std::vector<Frame> frames;
  // Text following "FRAME" on each frame line (usually empty).
  std::vector<std::string> frame_params;
};

namespace internal {

inline bool ParseInt(const std::string& text, int* value) {
  if (text.empty() || text.size() > 9) return false;
  int v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  *value = v;
  return true;
}

// Maps a C tag value to (format, bit depth).
inline void ParseColorspace(const std::string& value, ChromaFormat* format,
                            BitDepth* depth) {
  std::string base = value;
  int bits = 8;
  if (const auto p = value.find('p'); p != std::string::npos && p == 3) {
    base = value.substr(0, 3);
    if (!ParseInt(value.substr(4), &bits) || (bits != 10 && bits != 12)) {
      Fail(ErrorCode::kUnsupportedColorspace, "C" + value);
    }
  } else if (value == "420jpeg" || value == "420paldv" ||
             value == "420mpeg2") {
    base = "420";
  }
  if (base == "420") {
    *format = ChromaFormat::k420();
  } else if (base == "422") {
    *format = ChromaFormat::k422();
  } else if (base == "440") {
    *format = ChromaFormat::k440();
  } else if (base == "444" && value != "444alpha") {
    *format = ChromaFormat::k444();
  } else {
    Fail(ErrorCode::kUnsupportedColorspace, "C" + value);
  }
  *depth = BitDepth::FromBits(bits);
}

inline std::string ColorspaceTag(ChromaFormat format, BitDepth depth) {
  std::string tag = "C" + format.name();
  if (depth.bits() > 8) {
    tag += "p" + std::to_string(depth.bits());
  } else if (format == ChromaFormat::k420()) {
    tag += "jpeg";
  }
  return tag;
}

// Reads through the next '\n'. Returns false on EOF before any byte.
inline bool ReadLine(std::istream& in, std::string* line, size_t max_len) {
  line->clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '\n') return true;
    line->push_back(static_cast<char>(c));
    if (line->size() > max_len) {
      Fail(ErrorCode::kMalformedHeader, "header line too long");
    }
  }
  if (line->empty()) return false;
  Fail(ErrorCode::kMalformedHeader, "unterminated header line");
}

}  // namespace internal

// Parses the stream header; leaves `in` at the first FRAME marker.
inline Y4mHeader ParseY4mHeader(std::istream& in) {
  static constexpr char kMagic[] = "YUV4MPEG2";
  char magic[9] = {};
  in.read(magic, 9);
  if (in.gcount() != 9 || std::string(magic, 9) != std::string(kMagic, 9)) {
    Fail(ErrorCode::kMissingMagic, "not a YUV4MPEG2 stream");
  }
  std::string line;
  if (!internal::ReadLine(in, &line, 4096)) {
    Fail(ErrorCode::kMalformedHeader, "missing header terminator");
  }
  if (!line.empty() && line[0] != ' ') {
    Fail(ErrorCode::kMissingMagic, "not a YUV4MPEG2 stream");
  }
  Y4mHeader header;
  bool has_w = false;
  bool has_h = false;
  std::istringstream tokens(line);
  std::string tag;
  while (tokens >> tag) {
    header.tags.push_back(tag);
    const std::string value = tag.substr(1);
    switch (tag[0]) {
      case 'W':
        has_w = internal::ParseInt(value, &header.width) && header.width > 0;
        if (!has_w) Fail(ErrorCode::kMalformedHeader, "bad width " + tag);
        break;
      case 'H':
        has_h = internal::ParseInt(value, &header.height) && header.height > 0;
        if (!has_h) Fail(ErrorCode::kMalformedHeader, "bad height " + tag);
        break;
      case 'F': {
        const auto colon = value.find(':');
        if (colon == std::string::npos ||
            !internal::ParseInt(value.substr(0, colon), &header.fps_num) ||
            !internal::ParseInt(value.substr(colon + 1), &header.fps_den)) {
          Fail(ErrorCode::kMalformedHeader, "bad frame rate " + tag);
        }
        break;
      }
      case 'I':
        if (value != "p" && value != "?") {
          Fail(ErrorCode::kUnsupportedFormat, "interlaced content " + tag);
        }
        break;
      case 'C':
        internal::ParseColorspace(value, &header.format, &header.depth);
        break;
      case 'A':
      case 'X':
        break;
      default:
        Fail(ErrorCode::kMalformedHeader, "unknown tag " + tag);
    }
  }
  if (!has_w || !has_h) {
    Fail(ErrorCode::kMalformedHeader, "missing W or H tag");
  }
  return header;
}

inline Y4mHeader ParseY4mHeader(const std::string& bytes) {
  std::istringstream in(bytes);
  return ParseY4mHeader(in);
}

// Reads one frame. Returns nullopt on a clean end of stream.
inline std::optional<Frame> ReadY4mFrame(std::istream& in,
                                         const Y4mHeader& header,
                                         std::string* frame_params = nullptr) {
  if (in.peek() == EOF) return std::nullopt;
  char marker[5] = {};
  in.read(marker, 5);
  if (in.gcount() != 5 || std::string(marker, 5) != "FRAME") {
    Fail(ErrorCode::kMissingFrameMarker, "expected FRAME");
  }
  std::string params;
  if (!internal::ReadLine(in, &params, 4096)) {
    Fail(ErrorCode::kTruncatedFrame, "stream ends in frame header");
  }
  if (!params.empty() && params[0] != ' ') {
    Fail(ErrorCode::kMissingFrameMarker, "expected FRAME");
  }
  if (frame_params) *frame_params = params;

  Frame frame =
      Frame::Create(header.width, header.height, header.format, header.depth);
  const int bytes_per_sample = header.depth.bits() > 8 ? 2 : 1;
  std::vector<char> buf;
  for (int p = 0; p < 3; ++p) {
    Plane& plane = frame.plane(p);
    buf.resize(static_cast<size_t>(plane.width()) * bytes_per_sample);
    for (int y = 0; y < plane.height(); ++y) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
        Fail(ErrorCode::kTruncatedFrame, "stream ends inside a plane");
      }
      auto row = plane.row(y);
      for (int x = 0; x < plane.width(); ++x) {
        if (bytes_per_sample == 1) {
          row[x] = static_cast<uint8_t>(buf[x]);
        } else {
          row[x] = static_cast<uint16_t>(static_cast<uint8_t>(buf[2 * x]) |
                                         static_cast<uint8_t>(buf[2 * x + 1])
                                             << 8);
          if (row[x] > header.depth.max_value()) {
            Fail(ErrorCode::kUnsupportedFormat, "sample exceeds bit depth");
          }
        }
      }
    }
  }
  return frame;
}

inline Y4mVideo ReadY4m(std::istream& in) {
  Y4mVideo video;
  video.header = ParseY4mHeader(in);
  std::string params;
  while (auto frame = ReadY4mFrame(in, video.header, &params)) {
    video.frames.push_back(std::move(*frame));
    video.frame_params.push_back(params);
  }
  return video;
}

// Header for freshly produced content.
inline Y4mHeader MakeY4mHeader(const Frame& frame) {
  Y4mHeader h;
  h.width = frame.width();
  h.height = frame.height();
  h.format = frame.format;
  h.depth = frame.depth;
  h.tags = {"W" + std::to_string(h.width), "H" + std::to_string(h.height),
            "F30:1", "Ip", "A1:1",
            internal::ColorspaceTag(frame.format, frame.depth)};
  return h;
}

inline void WriteY4mHeader(std::ostream& out, const Y4mHeader& header) {
  out << "YUV4MPEG2";
  for (const auto& tag : header.tags) out << ' ' << tag;
  out << '\n';
}

inline void WriteY4mFrame(std::ostream& out, const Frame& frame,
                          const std::string& params = {}) {
  out << "FRAME" << params << '\n';
  const bool wide = frame.depth.bits() > 8;
  std::vector<char> buf;
  for (int p = 0; p < 3; ++p) {
    const Plane& plane = frame.plane(p);
    for (int y = 0; y < plane.height(); ++y) {
      buf.clear();
      for (uint16_t v : plane.row(y)) {
        buf.push_back(static_cast<char>(v & 0xFF));
        if (wide) buf.push_back(static_cast<char>(v >> 8));
      }
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
  }
}

inline void WriteY4m(std::ostream& out, const Y4mVideo& video) {
  WriteY4mHeader(out, video.header);
  for (size_t i = 0; i < video.frames.size(); ++i) {
    WriteY4mFrame(out, video.frames[i],
                  i < video.frame_params.size() ? video.frame_params[i] : "");
  }
}

}  // namespace cfl

#endif  // CFL_Y4M_H_
