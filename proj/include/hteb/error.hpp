// Copyright 2026 The hteb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hteb {

enum class Errc {
  kTransport,
  kProtocol,
  kDimensionMismatch,
  kIo,
  kMissingPlaceholder,
  kEmptyPool,
  kEmptyInput,
  kLengthMismatch,
  kUnparseableScore,
  kAllZero,
  kTooFew,
  kDegenerate,
  kOutOfRange,
  kInsufficientRaters,
  kZeroVector,
  kTooFewModels,
  kMissingCondition,
  kTooFewDatasets,
  kSingleClass,
  kEmptyCorpus,
  kNoPositives,
  kLabelMismatch,
  kConfig,
  kInvalidArgument,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kTransport: return "TransportError";
    case Errc::kProtocol: return "ProtocolError";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kIo: return "IoError";
    case Errc::kMissingPlaceholder: return "MissingPlaceholder";
    case Errc::kEmptyPool: return "EmptyPool";
    case Errc::kEmptyInput: return "EmptyInput";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kUnparseableScore: return "UnparseableScore";
    case Errc::kAllZero: return "AllZero";
    case Errc::kTooFew: return "TooFew";
    case Errc::kDegenerate: return "Degenerate";
    case Errc::kOutOfRange: return "OutOfRange";
    case Errc::kInsufficientRaters: return "InsufficientRaters";
    case Errc::kZeroVector: return "ZeroVector";
    case Errc::kTooFewModels: return "TooFewModels";
    case Errc::kMissingCondition: return "MissingCondition";
    case Errc::kTooFewDatasets: return "TooFewDatasets";
    case Errc::kSingleClass: return "SingleClass";
    case Errc::kEmptyCorpus: return "EmptyCorpus";
    case Errc::kNoPositives: return "NoPositives";
    case Errc::kLabelMismatch: return "LabelMismatch";
    case Errc::kConfig: return "ConfigError";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hteb
