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

// Hostname extraction from bytecode.
//
// Grammar (ASCII, case-insensitive):
//
//   host  := (label ".")+ tld         total length <= 253
//   label := [a-z0-9] ([a-z0-9-]* [a-z0-9])?
//   tld   := [a-z]{2,}
//
// Matches are leftmost-longest and non-overlapping, the way a regex scanner
// would report them. A scheme such as "https://" and anything after '/', ':'
// or '?' fall outside the match because those characters are not in the
// grammar's alphabet.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "trackscan/apk.hpp"
#include "trackscan/dex.hpp"
#include "trackscan/mutf8.hpp"

namespace trackscan {

enum class ScanMode { StringPool, RawScan, HostList };

constexpr std::string_view scan_mode_name(ScanMode m) {
  switch (m) {
    case ScanMode::StringPool: return "string_pool";
    case ScanMode::RawScan: return "raw_scan";
    case ScanMode::HostList: return "host_list";
  }
  return "unknown";
}

struct HostCandidate {
  std::string text;
  std::string source_entry;
  std::uint64_t source_offset = 0;
  ScanMode mode = ScanMode::StringPool;

  friend bool operator==(const HostCandidate&, const HostCandidate&) = default;
};

inline constexpr std::size_t kMaxHostLength = 253;

namespace detail {

constexpr bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
constexpr bool is_alnum(char c) { return is_alpha(c) || (c >= '0' && c <= '9'); }
constexpr bool is_host_char(char c) { return is_alnum(c) || c == '-' || c == '.'; }
constexpr char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = to_lower(c);
  return out;
}

/// Scans `text` and calls emit(offset, match) for each hostname match.
template <class Emit>
void scan_hostnames(std::string_view text, Emit&& emit) {
  const std::size_t n = text.size();
  std::size_t p = 0;
  while (p < n) {
    if (!is_host_char(text[p])) {
      ++p;
      continue;
    }
    std::size_t run_end = p;
    while (run_end < n && is_host_char(text[run_end])) ++run_end;

    auto seg_end = [&](std::size_t from) {
      std::size_t e = from;
      while (e < run_end && text[e] != '.') ++e;
      return e;
    };
    auto whole_label = [&](std::size_t s, std::size_t e) {
      return e > s && is_alnum(text[s]) && is_alnum(text[e - 1]);
    };

    while (p < run_end) {
      // Leading hyphens can never start a label.
      while (p < run_end && text[p] == '-') ++p;
      if (p >= run_end) break;
      std::size_t first_end = seg_end(p);
      if (!whole_label(p, first_end)) {
        p = first_end + 1;
        continue;
      }
      // Walk the chain of labels after the first one; remember the furthest
      // point where a tld (alphabetic prefix of a label, length >= 2) ends.
      std::size_t best_end = 0;
      std::size_t seg = first_end;
      std::size_t stop = run_end;  // start of the segment that broke the chain
      while (seg < run_end && text[seg] == '.') {
        const std::size_t s = seg + 1;
        const std::size_t e = seg_end(s);
        std::size_t alpha = s;
        while (alpha < e && is_alpha(text[alpha])) ++alpha;
        if (alpha - s >= 2) best_end = alpha;
        if (!whole_label(s, e)) {
          stop = s;
          break;
        }
        seg = e;
      }
      if (best_end != 0) {
        if (best_end - p <= kMaxHostLength) emit(p, text.substr(p, best_end - p));
        p = best_end;
      } else {
        // Any later start inside the same chain fails the same way.
        p = std::max(stop, first_end + 1);
      }
    }
    p = run_end;
  }
}

inline void sort_candidates(std::vector<HostCandidate>& out) {
  std::sort(out.begin(), out.end(), [](const HostCandidate& a, const HostCandidate& b) {
    return std::tie(a.source_offset, a.text) < std::tie(b.source_offset, b.text);
  });
}

inline bool all_plain_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c != 0 && static_cast<unsigned char>(c) < 0x80; });
}

}  // namespace detail

/// Hostnames inside decoded string-pool entries. Offsets are file offsets of
/// the match's first byte in the MUTF-8 string data.
inline std::vector<HostCandidate> scan_hosts_structured(std::span<const DexString> strings,
                                                        const std::string& source_entry) {
  std::vector<HostCandidate> out;
  for (const auto& s : strings) {
    const bool ascii = detail::all_plain_ascii(s.value);
    detail::scan_hostnames(s.value, [&](std::size_t pos, std::string_view match) {
      std::uint64_t byte_pos = pos;
      if (!ascii) byte_pos = encode_mutf8(std::string_view(s.value).substr(0, pos)).size();
      out.push_back({detail::lowercase(match), source_entry, s.data_offset + byte_pos, ScanMode::StringPool});
    });
  }
  detail::sort_candidates(out);
  return out;
}

/// Plain-string form. Offsets index the concatenation of the strings, each
/// followed by one NUL separator.
inline std::vector<HostCandidate> scan_hosts_structured(std::span<const std::string> strings,
                                                        const std::string& source_entry,
                                                        ScanMode mode = ScanMode::StringPool) {
  std::vector<HostCandidate> out;
  std::uint64_t base = 0;
  for (const auto& s : strings) {
    detail::scan_hostnames(s, [&](std::size_t pos, std::string_view match) {
      out.push_back({detail::lowercase(match), source_entry, base + pos, mode});
    });
    base += s.size() + 1;
  }
  detail::sort_candidates(out);
  return out;
}

/// Scans the raw bytes of a blob; no DEX structure is assumed.
inline std::vector<HostCandidate> scan_hosts_raw(ByteView bytes, const std::string& source_entry) {
  std::vector<HostCandidate> out;
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  detail::scan_hostnames(text, [&](std::size_t pos, std::string_view match) {
    out.push_back({detail::lowercase(match), source_entry, pos, ScanMode::RawScan});
  });
  return out;  // emitted in offset order already
}

inline std::vector<HostCandidate> scan_hosts_raw(const DexBlob& blob) {
  return scan_hosts_raw(blob.bytes, blob.entry_name);
}

}  // namespace trackscan
