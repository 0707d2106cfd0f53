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

#ifndef CFL_CORPUS_H_
#define CFL_CORPUS_H_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cfl/color.h"
#include "cfl/error.h"
#include "cfl/frame.h"
#include "cfl/sweep.h"
#include "cfl/y4m.h"

namespace cfl {

inline bool IsImageFile(const std::filesystem::path& p) {
  const std::string ext = p.extension().string();
  return ext == ".ppm" || ext == ".y4m";
}

// 4:4:4 frames are downsampled to `format`; any other mismatch is rejected.
inline Frame ToFormat(const Frame& f, ChromaFormat format) {
  if (f.format == format) return f;
  if (f.format == ChromaFormat::k444()) return ChromaDownsample(f, format);
  Fail(ErrorCode::kUnsupportedFormat,
       "cannot convert " + f.format.name() + " to " + format.name());
}

// One entry per PPM image or Y4M frame ("name" or "name#k" for k > 0).
inline std::vector<SweepImage> LoadImageFile(const std::filesystem::path& path,
                                             ChromaFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "input not found: " + path.string());
  const std::string stem = path.stem().string();
  std::vector<SweepImage> out;
  if (path.extension() == ".ppm") {
    out.push_back({stem, ToFormat(RgbToYcbcr(ReadPpm(in)), format)});
  } else if (path.extension() == ".y4m") {
    const Y4mVideo video = ReadY4m(in);
    for (size_t i = 0; i < video.frames.size(); ++i) {
      out.push_back({i == 0 ? stem : stem + "#" + std::to_string(i),
                     ToFormat(video.frames[i], format)});
    }
  } else {
    Fail(ErrorCode::kUnsupportedFormat, "expected .ppm or .y4m: " + path.string());
  }
  return out;
}

// Files are taken as given; directories contribute their .ppm/.y4m files in
// name order (not recursive).
inline std::vector<SweepImage> LoadInputs(const std::vector<std::string>& inputs,
                                          ChromaFormat format) {
  namespace fs = std::filesystem;
  std::vector<SweepImage> out;
  for (const auto& input : inputs) {
    const fs::path p(input);
    std::error_code ec;
    if (!fs::exists(p, ec)) Fail(ErrorCode::kIoError, "input not found: " + input);
    std::vector<fs::path> files;
    if (fs::is_directory(p, ec)) {
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && IsImageFile(e.path())) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
    } else {
      files.push_back(p);
    }
    for (const auto& f : files) {
      auto imgs = LoadImageFile(f, format);
      for (auto& img : imgs) out.push_back(std::move(img));
    }
  }
  if (out.empty()) Fail(ErrorCode::kEmptyCorpus, "no images in the given inputs");
  return out;
}

}  // namespace cfl

#endif  // CFL_CORPUS_H_
