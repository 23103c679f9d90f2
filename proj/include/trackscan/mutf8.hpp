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

// Modified UTF-8 as used by DEX string_data items: U+0000 is written as
// C0 80, and code points above U+FFFF are written as a UTF-16 surrogate pair
// with each half encoded as a three-byte sequence. Decoded text is returned
// as standard UTF-8.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "trackscan/byte_source.hpp"
#include "trackscan/error.hpp"

namespace trackscan {

namespace detail {

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline bool is_high_surrogate(char32_t u) { return u >= 0xD800 && u <= 0xDBFF; }
inline bool is_low_surrogate(char32_t u) { return u >= 0xDC00 && u <= 0xDFFF; }

inline void append_mutf8_unit(Bytes& out, char32_t unit) {
  if (unit != 0 && unit < 0x80) {
    out.push_back(static_cast<std::uint8_t>(unit));
  } else if (unit < 0x800) {
    out.push_back(static_cast<std::uint8_t>(0xC0 | (unit >> 6)));
    out.push_back(static_cast<std::uint8_t>(0x80 | (unit & 0x3F)));
  } else {
    out.push_back(static_cast<std::uint8_t>(0xE0 | (unit >> 12)));
    out.push_back(static_cast<std::uint8_t>(0x80 | ((unit >> 6) & 0x3F)));
    out.push_back(static_cast<std::uint8_t>(0x80 | (unit & 0x3F)));
  }
}

/// Decodes one code point from well-formed UTF-8; throws InvalidArgument
/// otherwise. Advances `pos`.
inline char32_t next_utf8(std::string_view s, std::size_t& pos) {
  auto fail = [] { throw Error(Errc::InvalidArgument, "invalid UTF-8 input"); };
  const auto b0 = static_cast<std::uint8_t>(s[pos]);
  std::size_t len = b0 < 0x80 ? 1 : (b0 & 0xE0) == 0xC0 ? 2 : (b0 & 0xF0) == 0xE0 ? 3 : (b0 & 0xF8) == 0xF0 ? 4 : 0;
  if (len == 0 || pos + len > s.size()) fail();
  char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<std::uint8_t>(s[pos + k]);
    if ((b & 0xC0) != 0x80) fail();
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail();
  pos += len;
  return cp;
}

}  // namespace detail

/// Decodes MUTF-8 bytes (without the trailing NUL) into UTF-8.
inline std::string decode_mutf8(ByteView bytes) {
  std::string out;
  out.reserve(bytes.size());
  char32_t pending_high = 0;
  std::size_t i = 0;
  auto fail = [&](const char* why) {
    throw Error(Errc::Mutf8DecodeError, std::string(why) + " at byte " + std::to_string(i));
  };
  while (i < bytes.size()) {
    const std::uint8_t b0 = bytes[i];
    char32_t unit = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      if (b0 == 0) fail("raw NUL byte");
      unit = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      unit = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      unit = b0 & 0x0F;
    } else {
      fail("invalid lead byte");
    }
    if (i + len > bytes.size()) fail("truncated sequence");
    for (std::size_t k = 1; k < len; ++k) {
      const std::uint8_t b = bytes[i + k];
      if ((b & 0xC0) != 0x80) fail("invalid continuation byte");
      unit = (unit << 6) | (b & 0x3F);
    }

    if (pending_high != 0) {
      if (!detail::is_low_surrogate(unit)) fail("unpaired high surrogate");
      detail::append_utf8(out, 0x10000 + ((pending_high - 0xD800) << 10) + (unit - 0xDC00));
      pending_high = 0;
    } else if (detail::is_high_surrogate(unit)) {
      pending_high = unit;
    } else if (detail::is_low_surrogate(unit)) {
      fail("unpaired low surrogate");
    } else {
      detail::append_utf8(out, unit);
    }
    i += len;
  }
  if (pending_high != 0) fail("unpaired high surrogate");
  return out;
}

/// Encodes UTF-8 text as MUTF-8 (no trailing NUL).
inline Bytes encode_mutf8(std::string_view utf8) {
  Bytes out;
  out.reserve(utf8.size());
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    const char32_t cp = detail::next_utf8(utf8, pos);
    if (cp >= 0x10000) {
      const char32_t v = cp - 0x10000;
      detail::append_mutf8_unit(out, 0xD800 + (v >> 10));
      detail::append_mutf8_unit(out, 0xDC00 + (v & 0x3FF));
    } else {
      detail::append_mutf8_unit(out, cp);
    }
  }
  return out;
}

/// Number of UTF-16 code units in UTF-8 text (the DEX string_data length).
inline std::uint32_t utf16_length(std::string_view utf8) {
  std::uint32_t n = 0;
  std::size_t pos = 0;
  while (pos < utf8.size()) n += detail::next_utf8(utf8, pos) >= 0x10000 ? 2 : 1;
  return n;
}

}  // namespace trackscan
