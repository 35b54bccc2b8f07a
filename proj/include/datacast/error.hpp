// Copyright 2026 The datacast Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dcast {

enum class Errc {
  // bundle
  DuplicateName,
  EntryPointMissing,
  IllegalName,
  BadMagic,
  Truncated,
  TrailingGarbage,
  TooManyFiles,
  UnsupportedCodec,
  CorruptStream,
  SizeMismatch,
  // codec
  EntryPointTooLong,
  UnsupportedVersion,
  BadField,
  PayloadEmpty,
  TooManySegments,
  InvalidSegment,
  Incomplete,
  Inconsistent,
  // carousel / channel
  InvalidConfig,
  // receiver
  OutOfOrderFrame,
  NotComplete,
  BodyCrcMismatch,
  DecompressFailure,
  ContainerParseFailure,
  // metrics
  ZeroBitrate,
  // files
  Io,
};

constexpr std::string_view to_string(Errc e) {
  switch (e) {
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::EntryPointMissing: return "EntryPointMissing";
    case Errc::IllegalName: return "IllegalName";
    case Errc::BadMagic: return "BadMagic";
    case Errc::Truncated: return "Truncated";
    case Errc::TrailingGarbage: return "TrailingGarbage";
    case Errc::TooManyFiles: return "TooManyFiles";
    case Errc::UnsupportedCodec: return "UnsupportedCodec";
    case Errc::CorruptStream: return "CorruptStream";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::EntryPointTooLong: return "EntryPointTooLong";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::BadField: return "BadField";
    case Errc::PayloadEmpty: return "PayloadEmpty";
    case Errc::TooManySegments: return "TooManySegments";
    case Errc::InvalidSegment: return "InvalidSegment";
    case Errc::Incomplete: return "Incomplete";
    case Errc::Inconsistent: return "Inconsistent";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::OutOfOrderFrame: return "OutOfOrderFrame";
    case Errc::NotComplete: return "NotComplete";
    case Errc::BodyCrcMismatch: return "BodyCrcMismatch";
    case Errc::DecompressFailure: return "DecompressFailure";
    case Errc::ContainerParseFailure: return "ContainerParseFailure";
    case Errc::ZeroBitrate: return "ZeroBitrate";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// Thrown by every fallible operation in the library. The code identifies
/// the failure class; what() carries a human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dcast
