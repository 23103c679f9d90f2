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
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "trackscan/error.hpp"

namespace trackscan {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Random-access read interface over an archive's bytes. Readers ask for
/// exact byte ranges so callers can observe (and tests can log) which parts
/// of a container were touched.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual std::uint64_t size() const = 0;
  /// Reads exactly `length` bytes at `offset`; throws TruncatedArchive when
  /// the range runs past the end.
  virtual Bytes read(std::uint64_t offset, std::size_t length) const = 0;
};

class MemorySource final : public ByteSource {
 public:
  explicit MemorySource(Bytes data) : data_(std::move(data)) {}

  std::uint64_t size() const override { return data_.size(); }

  Bytes read(std::uint64_t offset, std::size_t length) const override {
    if (offset > data_.size() || length > data_.size() - offset) {
      throw Error(Errc::TruncatedArchive, "read past end of buffer");
    }
    auto first = data_.begin() + static_cast<std::ptrdiff_t>(offset);
    return Bytes(first, first + static_cast<std::ptrdiff_t>(length));
  }

 private:
  Bytes data_;
};

class FileSource final : public ByteSource {
 public:
  explicit FileSource(const std::filesystem::path& path) : path_(path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      throw Error(Errc::IoError, "not a readable file", path.string());
    }
    size_ = std::filesystem::file_size(path, ec);
    if (ec) throw Error(Errc::IoError, ec.message(), path.string());
    stream_.open(path, std::ios::binary);
    if (!stream_) throw Error(Errc::IoError, "cannot open", path.string());
  }

  std::uint64_t size() const override { return size_; }

  Bytes read(std::uint64_t offset, std::size_t length) const override {
    if (offset > size_ || length > size_ - offset) {
      throw Error(Errc::TruncatedArchive, "read past end of file", path_.string());
    }
    Bytes out(length);
    std::lock_guard lock(mutex_);
    stream_.clear();
    stream_.seekg(static_cast<std::streamoff>(offset));
    stream_.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(length));
    if (static_cast<std::size_t>(stream_.gcount()) != length) {
      throw Error(Errc::IoError, "short read", path_.string());
    }
    return out;
  }

 private:
  std::filesystem::path path_;
  std::uint64_t size_ = 0;
  mutable std::ifstream stream_;
  mutable std::mutex mutex_;
};

/// Wraps another source and records every (offset, length) request.
class AccessLoggingSource final : public ByteSource {
 public:
  struct Access {
    std::uint64_t offset;
    std::size_t length;
  };

  explicit AccessLoggingSource(std::shared_ptr<const ByteSource> inner) : inner_(std::move(inner)) {}

  std::uint64_t size() const override { return inner_->size(); }

  Bytes read(std::uint64_t offset, std::size_t length) const override {
    {
      std::lock_guard lock(mutex_);
      log_.push_back({offset, length});
    }
    return inner_->read(offset, length);
  }

  std::vector<Access> accesses() const {
    std::lock_guard lock(mutex_);
    return log_;
  }

  /// True if any logged read overlaps [first, last).
  bool touched(std::uint64_t first, std::uint64_t last) const {
    std::lock_guard lock(mutex_);
    for (const auto& a : log_) {
      if (a.offset < last && first < a.offset + a.length) return true;
    }
    return false;
  }

 private:
  std::shared_ptr<const ByteSource> inner_;
  mutable std::mutex mutex_;
  mutable std::vector<Access> log_;
};

inline Bytes read_file_bytes(const std::filesystem::path& path) {
  FileSource src(path);
  return src.read(0, static_cast<std::size_t>(src.size()));
}

inline std::string read_file_text(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

namespace detail {

inline std::uint16_t load_u16(ByteView b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

inline std::uint32_t load_u32(ByteView b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

}  // namespace detail

}  // namespace trackscan
