/*
 * Copyright (C) 2026 The trackscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace trackscan {

enum class Errc {
  // container / apk
  IoError,
  NotAZipContainer,
  TruncatedArchive,
  DecompressionError,
  UnsupportedCompressionMethod,
  MalformedXml,
  // dex
  BadMagic,
  BadEndianTag,
  TruncatedHeader,
  BoundsViolation,
  BadStringOffset,
  Mutf8DecodeError,
  MissingNulTerminator,
  // knowledge base
  ParseError,
  UnknownCompanyReference,
  DuplicateDomain,
  OwnershipCycle,
  UnnormalizedDomain,
  UnknownCompany,
  // domains
  NoRegistrableDomain,
  // metrics
  EmptyInput,
  ZeroMean,
  InvalidArgument,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::IoError: return "IoError";
    case Errc::NotAZipContainer: return "NotAZipContainer";
    case Errc::TruncatedArchive: return "TruncatedArchive";
    case Errc::DecompressionError: return "DecompressionError";
    case Errc::UnsupportedCompressionMethod: return "UnsupportedCompressionMethod";
    case Errc::MalformedXml: return "MalformedXml";
    case Errc::BadMagic: return "BadMagic";
    case Errc::BadEndianTag: return "BadEndianTag";
    case Errc::TruncatedHeader: return "TruncatedHeader";
    case Errc::BoundsViolation: return "BoundsViolation";
    case Errc::BadStringOffset: return "BadStringOffset";
    case Errc::Mutf8DecodeError: return "Mutf8DecodeError";
    case Errc::MissingNulTerminator: return "MissingNulTerminator";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownCompanyReference: return "UnknownCompanyReference";
    case Errc::DuplicateDomain: return "DuplicateDomain";
    case Errc::OwnershipCycle: return "OwnershipCycle";
    case Errc::UnnormalizedDomain: return "UnnormalizedDomain";
    case Errc::UnknownCompany: return "UnknownCompany";
    case Errc::NoRegistrableDomain: return "NoRegistrableDomain";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::ZeroMean: return "ZeroMean";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the failure
/// kind; `where()` carries file/line context when the failure came from
/// an input file.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::string where = {})
      : std::runtime_error(format(code, message, where)), code_(code), where_(std::move(where)) {}

  Errc code() const noexcept { return code_; }
  const std::string& where() const noexcept { return where_; }

 private:
  static std::string format(Errc code, const std::string& message, const std::string& where) {
    std::string out;
    if (!where.empty()) {
      out += where;
      out += ": ";
    }
    out += errc_name(code);
    if (!message.empty()) {
      out += ": ";
      out += message;
    }
    return out;
  }

  Errc code_;
  std::string where_;
};

inline std::string file_line(const std::string& file, std::size_t line) {
  return file + ":" + std::to_string(line);
}

}  // namespace trackscan
