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

// Native reader for APK (ZIP) containers. Only the central directory is read
// when an archive is opened; entry payloads are fetched on demand.

#pragma once

#include <zlib.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "trackscan/byte_source.hpp"
#include "trackscan/error.hpp"

namespace trackscan {

enum class CompressionMethod { Stored, Deflate, Unsupported };

struct ApkEntry {
  std::string name;
  std::uint64_t compressed_size = 0;
  std::uint64_t uncompressed_size = 0;
  CompressionMethod method = CompressionMethod::Stored;
  std::uint16_t raw_method = 0;  // method id as stored in the container
  std::uint32_t crc32 = 0;
  std::uint64_t local_header_offset = 0;
  bool encrypted = false;
  // A later entry with the same name supersedes this one.
  bool shadowed = false;

  bool supported() const { return method != CompressionMethod::Unsupported && !encrypted; }
};

struct DexBlob {
  std::string entry_name;
  Bytes bytes;
};

class ApkArchive {
 public:
  ApkArchive(std::filesystem::path source_path, std::shared_ptr<const ByteSource> source,
             std::vector<ApkEntry> entries, std::vector<std::string> warnings)
      : source_path_(std::move(source_path)),
        source_(std::move(source)),
        entries_(std::move(entries)),
        warnings_(std::move(warnings)) {}

  const std::filesystem::path& source_path() const { return source_path_; }
  const std::vector<ApkEntry>& entries() const { return entries_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// The effective (last) entry for `name`, if any.
  const ApkEntry* find(std::string_view name) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
      if (it->name == name) return &*it;
    }
    return nullptr;
  }

  /// Reads and decompresses one entry, verifying its CRC-32.
  Bytes read_entry(const ApkEntry& entry) const;

 private:
  std::filesystem::path source_path_;
  std::shared_ptr<const ByteSource> source_;
  std::vector<ApkEntry> entries_;
  std::vector<std::string> warnings_;
};

namespace detail {

inline constexpr std::uint32_t kEocdSignature = 0x06054b50;
inline constexpr std::uint32_t kCentralSignature = 0x02014b50;
inline constexpr std::uint32_t kLocalSignature = 0x04034b50;
inline constexpr std::size_t kEocdSize = 22;
inline constexpr std::size_t kCentralHeaderSize = 46;
inline constexpr std::size_t kLocalHeaderSize = 30;
inline constexpr std::uint64_t kMaxEntrySize = 1ULL << 30;

inline Bytes inflate_raw(ByteView input, std::uint64_t expected_size, const std::string& where) {
  if (expected_size > kMaxEntrySize) {
    throw Error(Errc::DecompressionError, "declared size exceeds limit", where);
  }
  Bytes out(static_cast<std::size_t>(expected_size));
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
    throw Error(Errc::DecompressionError, "inflateInit2 failed", where);
  }
  // zlib's API takes non-const input; it never writes through next_in.
  zs.next_in = const_cast<Bytef*>(input.data());
  zs.avail_in = static_cast<uInt>(input.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) {
    throw Error(Errc::DecompressionError,
                std::string("deflate stream did not terminate (") + (zs.msg ? zs.msg : "truncated") + ")",
                where);
  }
  if (produced != expected_size) {
    throw Error(Errc::DecompressionError, "inflated size does not match header", where);
  }
  return out;
}

inline std::uint32_t crc32_of(ByteView data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // Feed in chunks: uInt may be narrower than size_t.
  std::size_t pos = 0;
  while (pos < data.size()) {
    auto chunk = static_cast<uInt>(std::min<std::size_t>(data.size() - pos, 1U << 30));
    crc = ::crc32(crc, data.data() + pos, chunk);
    pos += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

// Dex entries sort as classes.dex, classes2.dex, classes3.dex, ...
inline std::optional<std::tuple<bool, std::uint64_t, std::string>> dex_entry_key(const std::string& name) {
  constexpr std::string_view prefix = "classes";
  constexpr std::string_view suffix = ".dex";
  if (name.size() < prefix.size() + suffix.size()) return std::nullopt;
  if (name.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) return std::nullopt;
  std::string_view digits(name.data() + prefix.size(), name.size() - prefix.size() - suffix.size());
  std::uint64_t number = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
    number = std::min<std::uint64_t>(number * 10 + static_cast<std::uint64_t>(c - '0'), 1ULL << 60);
  }
  return std::tuple{!digits.empty(), number, name};
}

}  // namespace detail

inline bool is_dex_entry_name(const std::string& name) { return detail::dex_entry_key(name).has_value(); }

/// Opens an archive from any byte source. Reads only the end-of-central-
/// directory record and the central directory.
inline ApkArchive open_apk(std::shared_ptr<const ByteSource> source, std::filesystem::path source_path = {}) {
  using namespace detail;
  const std::string where = source_path.string();
  const std::uint64_t file_size = source->size();
  if (file_size < kEocdSize) throw Error(Errc::NotAZipContainer, "file too small for a zip container", where);

  // The EOCD record sits in the last 22 + 65535 (max comment) bytes. The
  // comment-less position is tried first, then the whole window.
  std::uint64_t eocd_pos = 0;
  auto find_eocd = [&](std::uint64_t window) -> std::optional<Bytes> {
    const std::uint64_t len = std::min<std::uint64_t>(file_size, window);
    const std::uint64_t start = file_size - len;
    Bytes tail = source->read(start, static_cast<std::size_t>(len));
    for (std::size_t i = tail.size() - kEocdSize + 1; i-- > 0;) {
      if (load_u32(tail, i) != kEocdSignature) continue;
      const std::size_t comment_len = load_u16(tail, i + 20);
      if (i + kEocdSize + comment_len <= tail.size()) {
        eocd_pos = start + i;
        return Bytes(tail.begin() + static_cast<std::ptrdiff_t>(i),
                     tail.begin() + static_cast<std::ptrdiff_t>(i + kEocdSize));
      }
    }
    return std::nullopt;
  };
  std::optional<Bytes> eocd = find_eocd(kEocdSize);
  if (!eocd) eocd = find_eocd(kEocdSize + 0xFFFF);
  if (!eocd) throw Error(Errc::NotAZipContainer, "end-of-central-directory signature not found", where);

  const ByteView rec(*eocd);
  const std::uint16_t disk = load_u16(rec, 4);
  const std::uint16_t cd_disk = load_u16(rec, 6);
  const std::uint16_t count_disk = load_u16(rec, 8);
  const std::uint16_t count = load_u16(rec, 10);
  const std::uint32_t cd_size = load_u32(rec, 12);
  const std::uint32_t cd_offset = load_u32(rec, 16);
  if (count == 0xFFFF || cd_size == 0xFFFFFFFF || cd_offset == 0xFFFFFFFF) {
    throw Error(Errc::NotAZipContainer, "zip64 containers are not supported", where);
  }
  if (disk != 0 || cd_disk != 0 || count_disk != count) {
    throw Error(Errc::NotAZipContainer, "multi-disk archives are not supported", where);
  }
  if (static_cast<std::uint64_t>(cd_offset) + cd_size > eocd_pos) {
    throw Error(Errc::TruncatedArchive, "central directory extends past its end record", where);
  }

  const Bytes cd = source->read(cd_offset, cd_size);
  std::vector<ApkEntry> entries;
  entries.reserve(count);
  std::size_t pos = 0;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (pos + kCentralHeaderSize > cd.size()) {
      throw Error(Errc::TruncatedArchive, "central directory holds fewer entries than declared", where);
    }
    if (load_u32(cd, pos) != kCentralSignature) {
      throw Error(Errc::TruncatedArchive, "bad central directory header signature", where);
    }
    ApkEntry e;
    const std::uint16_t flags = load_u16(cd, pos + 8);
    e.raw_method = load_u16(cd, pos + 10);
    e.crc32 = load_u32(cd, pos + 16);
    e.compressed_size = load_u32(cd, pos + 20);
    e.uncompressed_size = load_u32(cd, pos + 24);
    const std::size_t name_len = load_u16(cd, pos + 28);
    const std::size_t extra_len = load_u16(cd, pos + 30);
    const std::size_t comment_len = load_u16(cd, pos + 32);
    e.local_header_offset = load_u32(cd, pos + 42);
    e.encrypted = (flags & 0x1) != 0;
    e.method = e.raw_method == 0   ? CompressionMethod::Stored
               : e.raw_method == 8 ? CompressionMethod::Deflate
                                   : CompressionMethod::Unsupported;
    const std::size_t record_len = kCentralHeaderSize + name_len + extra_len + comment_len;
    if (pos + record_len > cd.size()) {
      throw Error(Errc::TruncatedArchive, "central directory record runs past directory end", where);
    }
    e.name.assign(reinterpret_cast<const char*>(cd.data() + pos + kCentralHeaderSize), name_len);
    entries.push_back(std::move(e));
    pos += record_len;
  }

  std::vector<std::string> warnings;
  std::map<std::string, std::size_t> occurrences;
  for (const auto& e : entries) ++occurrences[e.name];
  for (auto& [name, n] : occurrences) {
    if (n > 1) {
      warnings.push_back("duplicate entry name '" + name + "' (" + std::to_string(n) +
                         " occurrences); the last one is used");
    }
  }
  std::map<std::string, std::size_t> last_index;
  for (std::size_t i = 0; i < entries.size(); ++i) last_index[entries[i].name] = i;
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].shadowed = last_index[entries[i].name] != i;
  for (const auto& e : entries) {
    if (!e.supported() && !e.shadowed) {
      warnings.push_back("entry '" + e.name + "' uses unsupported " +
                         (e.encrypted ? std::string("encryption") : "compression method " + std::to_string(e.raw_method)));
    }
  }

  return ApkArchive(std::move(source_path), std::move(source), std::move(entries), std::move(warnings));
}

inline ApkArchive open_apk(const std::filesystem::path& path) {
  return open_apk(std::make_shared<FileSource>(path), path);
}

inline Bytes ApkArchive::read_entry(const ApkEntry& entry) const {
  using namespace detail;
  const std::string where = source_path_.string() + (source_path_.empty() ? "" : ":") + entry.name;
  if (!entry.supported()) {
    throw Error(Errc::UnsupportedCompressionMethod,
                entry.encrypted ? std::string("encrypted entry") : "method " + std::to_string(entry.raw_method), where);
  }
  const Bytes local = source_->read(entry.local_header_offset, kLocalHeaderSize);
  if (load_u32(local, 0) != kLocalSignature) {
    throw Error(Errc::TruncatedArchive, "bad local header signature", where);
  }
  const std::uint64_t data_offset =
      entry.local_header_offset + kLocalHeaderSize + load_u16(local, 26) + load_u16(local, 28);
  if (entry.compressed_size > kMaxEntrySize) {
    throw Error(Errc::DecompressionError, "declared size exceeds limit", where);
  }
  const Bytes payload = source_->read(data_offset, static_cast<std::size_t>(entry.compressed_size));

  Bytes out;
  if (entry.method == CompressionMethod::Stored) {
    if (entry.compressed_size != entry.uncompressed_size) {
      throw Error(Errc::DecompressionError, "stored entry sizes disagree", where);
    }
    out = payload;
  } else {
    out = inflate_raw(payload, entry.uncompressed_size, where);
  }
  if (crc32_of(out) != entry.crc32) throw Error(Errc::DecompressionError, "CRC-32 mismatch", where);
  return out;
}

/// All classes[0-9]*.dex entries, decompressed, classes.dex first and the
/// rest in ascending numeric order.
inline std::vector<DexBlob> extract_dex_files(const ApkArchive& archive) {
  std::vector<std::pair<std::tuple<bool, std::uint64_t, std::string>, const ApkEntry*>> selected;
  for (const auto& e : archive.entries()) {
    if (e.shadowed) continue;
    if (auto key = detail::dex_entry_key(e.name)) selected.emplace_back(std::move(*key), &e);
  }
  std::sort(selected.begin(), selected.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<DexBlob> out;
  out.reserve(selected.size());
  for (const auto& [key, entry] : selected) out.push_back({entry->name, archive.read_entry(*entry)});
  return out;
}

}  // namespace trackscan
