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

#ifndef CFL_ERROR_H_
#define CFL_ERROR_H_

#include <stdexcept>
#include <string>

namespace cfl {

enum class ErrorCode {
  kMissingMagic,
  kUnsupportedColorspace,
  kMalformedHeader,
  kTruncatedFrame,
  kMissingFrameMarker,
  kUnsupportedFormat,
  kIoError,
  kDimensionMismatch,
  kOutOfBounds,
  kInvalidBlockSize,
  kUnsupportedBlockSize,
  kAlphaOutOfRange,
  kEmptyCorpus,
  kInsufficientNeighbors,
  kSymbolOutOfRange,
  kTruncatedStream,
  kInvalidParams,
  kInvalidArgument,
  kInvalidCurve,
  kNoOverlap,
  kClosureMismatch,
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingMagic: return "MissingMagic";
    case ErrorCode::kUnsupportedColorspace: return "UnsupportedColorspace";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kTruncatedFrame: return "TruncatedFrame";
    case ErrorCode::kMissingFrameMarker: return "MissingFrameMarker";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kInvalidBlockSize: return "InvalidBlockSize";
    case ErrorCode::kUnsupportedBlockSize: return "UnsupportedBlockSize";
    case ErrorCode::kAlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kInsufficientNeighbors: return "InsufficientNeighbors";
    case ErrorCode::kSymbolOutOfRange: return "SymbolOutOfRange";
    case ErrorCode::kTruncatedStream: return "TruncatedStream";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidCurve: return "InvalidCurve";
    case ErrorCode::kNoOverlap: return "NoOverlap";
    case ErrorCode::kClosureMismatch: return "ClosureMismatch";
  }
  return "Unknown";
}

// Input-side failures: the data handed to the library is unusable.
inline bool IsInputError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingMagic:
    case ErrorCode::kUnsupportedColorspace:
    case ErrorCode::kMalformedHeader:
    case ErrorCode::kTruncatedFrame:
    case ErrorCode::kMissingFrameMarker:
    case ErrorCode::kUnsupportedFormat:
    case ErrorCode::kIoError:
    case ErrorCode::kEmptyCorpus:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cfl

#endif  // CFL_ERROR_H_
