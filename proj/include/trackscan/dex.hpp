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

#include <cstdint>
#include <string>
#include <vector>

#include "trackscan/apk.hpp"
#include "trackscan/byte_source.hpp"
#include "trackscan/error.hpp"
#include "trackscan/mutf8.hpp"

namespace trackscan {

inline constexpr std::size_t kDexHeaderSize = 0x70;
inline constexpr std::uint32_t kDexEndianConstant = 0x12345678;
inline constexpr std::uint32_t kDexReverseEndianConstant = 0x78563412;

struct DexHeader {
  int version = 0;
  std::uint32_t checksum = 0;
  std::uint32_t file_size = 0;
  std::uint32_t header_size = 0;
  std::uint32_t endian_tag = 0;
  std::uint32_t string_ids_size = 0;
  std::uint32_t string_ids_off = 0;
};

/// One string_data item: the decoded text and the file offset of its first
/// MUTF-8 byte (just past the ULEB128 length prefix).
struct DexString {
  std::string value;
  std::uint32_t data_offset = 0;
};

namespace detail {

inline std::uint32_t read_uleb128(ByteView bytes, std::size_t& pos, const std::string& where) {
  std::uint32_t result = 0;
  for (int shift = 0; shift < 35; shift += 7) {
    if (pos >= bytes.size()) throw Error(Errc::BadStringOffset, "ULEB128 runs past end of file", where);
    const std::uint8_t b = bytes[pos++];
    result |= static_cast<std::uint32_t>(b & 0x7F) << shift;
    if ((b & 0x80) == 0) return result;
  }
  throw Error(Errc::BadStringOffset, "ULEB128 longer than five bytes", where);
}

}  // namespace detail

inline DexHeader parse_dex_header(const DexBlob& blob) {
  using detail::load_u32;
  const auto& b = blob.bytes;
  const std::string& where = blob.entry_name;
  if (b.size() >= 4 && !(b[0] == 'd' && b[1] == 'e' && b[2] == 'x' && b[3] == '\n')) {
    throw Error(Errc::BadMagic, "missing dex\\n magic", where);
  }
  if (b.size() < kDexHeaderSize) {
    throw Error(Errc::TruncatedHeader, std::to_string(b.size()) + " bytes, need 112", where);
  }
  auto digit = [&](std::size_t i) { return b[i] >= '0' && b[i] <= '9'; };
  if (!digit(4) || !digit(5) || !digit(6) || b[7] != 0) {
    throw Error(Errc::BadMagic, "malformed version field", where);
  }
  DexHeader h;
  h.version = (b[4] - '0') * 100 + (b[5] - '0') * 10 + (b[6] - '0');
  h.checksum = load_u32(b, 8);
  h.file_size = load_u32(b, 32);
  h.header_size = load_u32(b, 36);
  h.endian_tag = load_u32(b, 40);
  h.string_ids_size = load_u32(b, 56);
  h.string_ids_off = load_u32(b, 60);
  if (h.endian_tag != kDexEndianConstant) {
    throw Error(Errc::BadEndianTag,
                h.endian_tag == kDexReverseEndianConstant ? "big-endian dex is not supported" : "unknown endian tag",
                where);
  }
  const std::uint64_t limit = std::min<std::uint64_t>(h.file_size, b.size());
  if (h.header_size < kDexHeaderSize || h.header_size > limit) {
    throw Error(Errc::BoundsViolation, "header_size out of range", where);
  }
  const std::uint64_t ids_end = static_cast<std::uint64_t>(h.string_ids_off) + 4ULL * h.string_ids_size;
  if (ids_end > limit) throw Error(Errc::BoundsViolation, "string_ids table lies outside the file", where);
  return h;
}

/// Decodes the string pool in string_ids order.
inline std::vector<DexString> extract_string_pool(const DexBlob& blob) {
  const DexHeader h = parse_dex_header(blob);
  const ByteView file(blob.bytes.data(), std::min<std::size_t>(blob.bytes.size(), h.file_size));
  const std::string& where = blob.entry_name;
  std::vector<DexString> out;
  out.reserve(h.string_ids_size);
  for (std::uint32_t i = 0; i < h.string_ids_size; ++i) {
    const std::uint32_t data_off = detail::load_u32(file, h.string_ids_off + 4ULL * i);
    if (data_off >= file.size()) {
      throw Error(Errc::BadStringOffset, "string_id " + std::to_string(i) + " points past end of file", where);
    }
    std::size_t pos = data_off;
    (void)detail::read_uleb128(file, pos, where);  // utf16 length; the NUL delimits the data
    const std::size_t start = pos;
    while (pos < file.size() && file[pos] != 0) ++pos;
    if (pos >= file.size()) {
      throw Error(Errc::MissingNulTerminator, "string_id " + std::to_string(i) + " is not NUL-terminated", where);
    }
    try {
      out.push_back({decode_mutf8(file.subspan(start, pos - start)), static_cast<std::uint32_t>(start)});
    } catch (const Error& e) {
      throw Error(Errc::Mutf8DecodeError, "string_id " + std::to_string(i) + ": " + e.what(), where);
    }
  }
  return out;
}

}  // namespace trackscan
